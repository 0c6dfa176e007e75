import os

BASE_DIR = os.path.abspath(os.path.dirname(__file__))


class Config:
    """Base configuration"""
    SEED = int(os.environ.get('EXTREMAL_SEED') or 0)
    N_JOBS = int(os.environ.get('EXTREMAL_N_JOBS') or 1)
    BURN_IN = int(os.environ.get('EXTREMAL_BURN_IN') or 1000)

    # Estimator settings
    TDC_FRACTION = float(os.environ.get('EXTREMAL_TDC_FRACTION') or 0.05)
    K_GAP_THRESHOLD = float(os.environ.get('EXTREMAL_K_GAP_THRESHOLD') or 0.05)

    LOG_LEVEL = os.environ.get('EXTREMAL_LOG_LEVEL') or 'INFO'
    LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(message)s'

    # Reference theta table of the study runner
    REFERENCE_TABLE = (
        os.environ.get('EXTREMAL_REFERENCE_TABLE')
        or os.path.join(BASE_DIR, 'data', 'reference_theta.json')
    )


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = 'DEBUG'


class ProductionConfig(Config):
    """Production configuration"""

    # Studies must be reproducible from the recorded environment
    def __init__(self):
        super().__init__()
        if not os.environ.get('EXTREMAL_SEED'):
            raise ValueError("EXTREMAL_SEED environment variable must be set in production")


class TestingConfig(Config):
    """Testing configuration"""
    N_JOBS = 1
    LOG_LEVEL = 'WARNING'


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
