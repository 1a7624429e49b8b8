import logging
import sys
from enum import IntEnum
from typing import Any

from colorama import Fore, Style, init

init(autoreset=True)


class LogLevel(IntEnum):
    """
    Enumeration of log levels.

    The numeric values line up with the standard `logging` levels so that the
    domain levels (SAMPLE, PASS, TRUNCATE, FAIL) sort between them.
    """

    DEBUG = logging.DEBUG
    SAMPLE = 15
    INFO = logging.INFO
    PASS = 21
    TRUNCATE = 25
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    FAIL = 41
    CRITICAL = logging.CRITICAL


for _level in (LogLevel.SAMPLE, LogLevel.PASS, LogLevel.TRUNCATE, LogLevel.FAIL):
    logging.addLevelName(_level.value, _level.name)

_ROOT_NAME: str = "idt"
_verbose: bool = False


def set_verbosity(verbose: bool) -> None:
    """
    Set the threshold of every logger created through ColoredLogger.

    Args:
        verbose (bool): DEBUG threshold when True, WARNING otherwise.
    """
    global _verbose
    _verbose = verbose
    logging.getLogger(_ROOT_NAME).setLevel(
        LogLevel.DEBUG if verbose else LogLevel.WARNING
    )


class ColoredLogger:
    """
    A custom logger that adds colored formatting to log messages.

    All instances hang below a common "idt" parent logger which owns the
    single stderr handler, so standard output stays free for CSV/JSON data.

    Args:
        name (str): The name of the logger.
        verbose (bool, optional): Whether to enable verbose logging. Defaults to False.

    Attributes:
        COLORS (dict[LogLevel, str]): A mapping of log levels to color codes.
    """

    COLORS: dict[LogLevel, str] = {
        LogLevel.DEBUG: Fore.CYAN,
        LogLevel.SAMPLE: Fore.CYAN,
        LogLevel.INFO: Fore.BLUE,
        LogLevel.PASS: Fore.GREEN,
        LogLevel.TRUNCATE: Fore.MAGENTA,
        LogLevel.WARNING: Fore.YELLOW,
        LogLevel.ERROR: Fore.RED,
        LogLevel.FAIL: f"{Fore.RED}{Style.BRIGHT}",
        LogLevel.CRITICAL: f"{Fore.RED}{Style.BRIGHT}",
    }

    def __init__(self, name: str, verbose: bool = False) -> None:
        """
        Initialize the ColoredLogger.

        Args:
            name (str): The name of the logger, usually the module `__name__`.
            verbose (bool, optional): Whether to enable verbose logging. Defaults to False.
        """
        root: logging.Logger = logging.getLogger(_ROOT_NAME)

        if not root.handlers:
            root.propagate = False
            console_handler = logging.StreamHandler(stream=sys.stderr)
            console_handler.setFormatter(self.ColoredFormatter("%(message)s"))
            root.addHandler(console_handler)
            root.setLevel(LogLevel.DEBUG if _verbose else LogLevel.WARNING)

        if verbose:
            set_verbosity(True)

        self.logger: logging.Logger = root.getChild(name)

    class ColoredFormatter(logging.Formatter):
        """
        A custom log formatter that adds color and log level to log messages.

        Args:
            fmt (str): The log message format.
        """

        def format(self, record: logging.LogRecord) -> str:
            """
            Format a log record with color and log level.

            Args:
                record (logging.LogRecord): The log record to format.

            Returns:
                str: The formatted log message.
            """
            try:
                log_level = LogLevel(record.levelno)
            except ValueError:
                log_level = None

            level_name: str = log_level.name if log_level else record.levelname
            log_level_color: str = ColoredLogger.COLORS.get(log_level, "")
            log_message: str = super().format(record)
            return f"{log_level_color}[{level_name}]:{Style.RESET_ALL} {log_message}"

    def is_enabled(self, level: LogLevel) -> bool:
        """Check whether messages at the specified log level would be emitted."""
        return self.logger.isEnabledFor(level.value)

    def log(self, level: LogLevel, message: str, *args: Any, **kwargs: Any) -> None:
        """
        Log a message with the specified log level.

        Args:
            level (LogLevel): The log level to use.
            message (str): The log message.
            *args (Any): Additional positional arguments for the log message.
            **kwargs (Any): Additional keyword arguments for the log message.

        Raises:
            ValueError: If the specified log level is not defined in the LogLevel enum.
        """
        if level in LogLevel.__members__.values():
            self.logger.log(level.value, message, *args, **kwargs)
        else:
            raise ValueError(f"Custom log level '{level}' is not defined.")
