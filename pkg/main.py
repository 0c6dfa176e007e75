from app import create_cli


def main():
    create_cli()()


if __name__ == "__main__":
    main()
