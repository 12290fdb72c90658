import os

from torb.errors import ParseError


def _positive_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{name} must be a positive integer, got {raw!r}")
    if value <= 0:
        raise ParseError(f"{name} must be a positive integer, got {raw!r}")
    return value


class Config:
    # Flask Configuration
    SECRET_KEY = os.environ.get('SECRET_KEY') or 'dev-secret-key-change-in-production'
    MAX_CONTENT_LENGTH = int(os.environ.get('MAX_CONTENT_LENGTH', 1024 * 1024))

    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    CLI_LOG_LEVEL = 'WARNING'
    LOG_FILE = 'logs/torb.log'

    # Search limits
    DEFAULT_GENUS_BUDGET = 10 ** 6
    DEFAULT_GENUS_PAIR_LENGTH = 4
    MAX_GENUS = 8

    # Finished genus jobs kept for /status and /genus before the oldest are dropped
    MAX_FINISHED_JOBS = 100

    @classmethod
    def genus_budget(cls) -> int:
        """Node cap for each genus level, from TORB_GENUS_BUDGET"""
        return _positive_int('TORB_GENUS_BUDGET', cls.DEFAULT_GENUS_BUDGET)

    @classmethod
    def genus_pair_length(cls) -> int:
        """Syllable bound for the candidate pairs of the genus >= 2 search"""
        return _positive_int('TORB_GENUS_PAIR_LENGTH', cls.DEFAULT_GENUS_PAIR_LENGTH)

    @classmethod
    def max_finished_jobs(cls) -> int:
        return _positive_int('TORB_MAX_FINISHED_JOBS', cls.MAX_FINISHED_JOBS)

    @classmethod
    def log_file(cls) -> str:
        """Log file path; an empty TORB_LOG_FILE disables file logging"""
        return os.environ.get('TORB_LOG_FILE', cls.LOG_FILE)

    @classmethod
    def validate_config(cls):
        """Validate configuration settings"""
        from torb.services.debug_logger import DebugLogger

        if not cls.SECRET_KEY or cls.SECRET_KEY == 'dev-secret-key-change-in-production':
            DebugLogger.log_warning("Using default SECRET_KEY. Change this in production!")

        # Surface bad search settings at startup rather than on the first request
        cls.genus_budget()
        cls.genus_pair_length()
        cls.max_finished_jobs()

        return True
