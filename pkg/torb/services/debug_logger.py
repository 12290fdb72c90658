import copy
import logging
import os
import sys
from typing import Optional, TextIO


class ColoredFormatter(logging.Formatter):
    """Custom formatter with colored output for different log levels"""

    # ANSI color codes
    COLORS = {
        'DEBUG': '\033[36m',      # Cyan
        'INFO': '\033[32m',       # Green
        'WARNING': '\033[33m',    # Yellow
        'ERROR': '\033[31m',      # Red
        'CRITICAL': '\033[35m',   # Magenta
        'RESET': '\033[0m'        # Reset
    }

    EMOJI = {
        'DEBUG': '🔍',
        'INFO': 'ℹ️',
        'WARNING': '⚠️',
        'ERROR': '❌',
        'CRITICAL': '🚨'
    }

    def format(self, record):
        # Work on a copy so the file handler still sees the plain level name
        record = copy.copy(record)
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.COLORS['RESET']}"

        formatted = super().format(record)

        emoji = self.EMOJI.get(levelname, '')
        if emoji:
            formatted = f"{emoji} {formatted}"

        return formatted


class DebugLogger:
    """Logging system shared by the torb library, CLI and HTTP service"""

    _logger = logging.getLogger('torb')
    _initialized = False
    _log_file: Optional[str] = None

    @classmethod
    def setup_logger(cls, log_level: str = 'INFO', log_file: Optional[str] = 'logs/torb.log',
                     stream: Optional[TextIO] = None):
        """Setup the logger; console output goes to stream (stdout by default)"""

        if cls._initialized:
            return

        level = getattr(logging, log_level.upper(), logging.INFO)

        cls._logger = logging.getLogger('torb')
        cls._logger.setLevel(logging.DEBUG if log_file else level)
        cls._logger.propagate = False

        # Clear existing handlers
        cls._logger.handlers.clear()

        detailed_formatter = logging.Formatter(
            '%(asctime)s | %(name)s | %(levelname)s | %(funcName)s:%(lineno)d | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        if log_file:
            directory = os.path.dirname(log_file)
            if directory:
                os.makedirs(directory, exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(detailed_formatter)
            cls._logger.addHandler(file_handler)
            cls._log_file = os.path.abspath(log_file)

        console_handler = logging.StreamHandler(stream or sys.stdout)
        console_handler.setLevel(level)
        console_handler.setFormatter(ColoredFormatter('%(levelname)s | %(message)s'))

        # Fix Windows encoding issues
        target = stream or sys.stdout
        if hasattr(target, 'reconfigure'):
            try:
                target.reconfigure(encoding='utf-8')
            except (ValueError, OSError):
                pass

        cls._logger.addHandler(console_handler)

        cls._initialized = True

        cls.log_debug("torb logging system initialized", {
            "log_file": cls._log_file,
            "log_level": log_level.upper()
        })

    @classmethod
    def reset(cls):
        """Drop all handlers so the next setup_logger call reconfigures"""
        for handler in list(cls._logger.handlers):
            handler.close()
            cls._logger.removeHandler(handler)
        cls._initialized = False
        cls._log_file = None

    @classmethod
    def _emit(cls, level: int, message: str, context: Optional[dict] = None,
              exception: Optional[Exception] = None):
        if not cls._logger.isEnabledFor(level):
            return
        if exception:
            message = f"{message} | Exception: {type(exception).__name__}: {str(exception)}"
        if context:
            message = f"{message} | Context: {context}"
        cls._logger.log(level, message, exc_info=bool(exception), stacklevel=3)

    @classmethod
    def log_debug(cls, message: str, context: Optional[dict] = None):
        """Log debug message with optional context"""
        cls._emit(logging.DEBUG, message, context)

    @classmethod
    def log_info(cls, message: str, context: Optional[dict] = None):
        """Log info message with optional context"""
        cls._emit(logging.INFO, message, context)

    @classmethod
    def log_warning(cls, message: str, context: Optional[dict] = None):
        """Log warning message with optional context"""
        cls._emit(logging.WARNING, message, context)

    @classmethod
    def log_error(cls, message: str, exception: Optional[Exception] = None, context: Optional[dict] = None):
        """Log error message with optional exception and context"""
        cls._emit(logging.ERROR, message, context, exception)

    @classmethod
    def log_critical(cls, message: str, exception: Optional[Exception] = None, context: Optional[dict] = None):
        """Log critical message with optional exception and context"""
        cls._emit(logging.CRITICAL, message, context, exception)

    @classmethod
    def log_performance(cls, operation: str, duration: float, context: Optional[dict] = None):
        """Log performance metrics"""
        cls._emit(logging.INFO, f"Performance | {operation}: {duration:.3f}s", context)

    @classmethod
    def log_request(cls, method: str, path: str, status_code: int, duration: float, user_agent: str = None):
        """Log HTTP request details"""
        message = f"Request | {method} {path} | Status: {status_code} | Duration: {duration:.3f}s"
        if user_agent:
            message = f"{message} | User-Agent: {user_agent}"
        cls._emit(logging.INFO, message)

    @classmethod
    def log_job(cls, job_id: str, action: str, details: Optional[dict] = None):
        """Log background genus search job events"""
        message = f"Genus Job | Job: {job_id} | Action: {action}"
        if details:
            message = f"{message} | Details: {details}"
        cls._emit(logging.INFO, message)

    @classmethod
    def log_search(cls, kind: str, status: str, details: Optional[dict] = None):
        """Log search progress: genus levels, budget exhaustion"""
        message = f"Search | {kind} | Status: {status}"
        if details:
            message = f"{message} | Details: {details}"
        cls._emit(logging.DEBUG, message)

    @classmethod
    def log_system_health(cls, component: str, status: str, details: Optional[dict] = None):
        """Log system health information"""
        message = f"System Health | {component} | Status: {status}"
        if details:
            message = f"{message} | Details: {details}"
        cls._emit(logging.INFO, message)

    @classmethod
    def get_log_file_path(cls) -> str:
        """Get the current log file path"""
        from torb.config import Config
        return cls._log_file or os.path.abspath(Config.log_file() or Config.LOG_FILE)

    @classmethod
    def get_recent_logs(cls, lines: int = 50) -> list:
        """Get recent log entries"""
        try:
            with open(cls.get_log_file_path(), 'r', encoding='utf-8') as f:
                return f.readlines()[-lines:]
        except FileNotFoundError:
            return []

    @classmethod
    def clear_logs(cls):
        """Clear the log file"""
        try:
            with open(cls.get_log_file_path(), 'w', encoding='utf-8') as f:
                f.write('')
            cls.log_info("📝 Log files cleared")
        except OSError as e:
            cls.log_error("Failed to clear log files", e)
