import click

from commands import reports_errors, write_output
from diagnostics import STATISTICS, cycle_trajectory, k_selection_report, trajectory
from harness import k_selection_frame, trajectory_frame
from utils import ingest_prices, load_series


@click.command()
@click.argument('file_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--k', type=int, default=3, show_default=True, help='Order of the D(k) condition.')
@click.option('--tau', type=float, default=50.0, show_default=True, help='Normalized level.')
@click.option('--s', type=float, default=3.0, show_default=True, help='Window exponent: k_n = floor(log(n) ** s).')
@click.option('--statistic', type=click.Choice(STATISTICS), default='p_k', show_default=True)
@click.option('--grid', default=None, help='Comma-separated prefix lengths (default: 20 log-spaced values).')
@click.option('--cycles', 'on_cycles', is_flag=True, help='Check D(2) on the cycle series of order k instead.')
@click.option('--select', is_flag=True, help='Print the k selection report for k = 1..k-max.')
@click.option('--k-max', type=int, default=6, show_default=True, help='Largest k of the selection report.')
@click.option('--prices', is_flag=True, help='Input holds prices; diagnose their log-returns.')
@click.pass_context
@reports_errors
def diagnose(ctx, file_path, k, tau, s, statistic, grid, on_cycles, select, k_max, prices):
    """Anti-D(k) trajectories over growing prefixes of the series, or the k selection report."""
    settings = ctx.obj['settings']
    x = ingest_prices(file_path) if prices else load_series(file_path)

    if select:
        report = k_selection_report(x, k_max, tau, s, threshold=settings.K_GAP_THRESHOLD)
        click.echo(f'recommended k: {report.recommended_k} ({report.advisory})', err=True)
        write_output(k_selection_frame(report))
        return

    if grid is not None:
        try:
            grid = [int(m) for m in grid.split(',') if m.strip()]
        except ValueError:
            raise click.BadParameter('grid must be comma-separated integers', param_hint='--grid')
    if on_cycles:
        points = cycle_trajectory(x, k, tau, s, grid=grid, n_jobs=settings.N_JOBS)
    else:
        points = trajectory(x, k, tau, s, grid=grid, statistic=statistic, n_jobs=settings.N_JOBS)
    write_output(trajectory_frame(points))
