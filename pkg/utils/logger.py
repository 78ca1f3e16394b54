import logging
from rich.markup import escape
from ui.printer import printer
from config.settings import LOG, LOG_LEVEL, LOG_TO_FILE, LOG_FILE, LOG_TO_UI


class Logger:
    _logger = None
    LEVELS = {
        "debug": logging.DEBUG,
        "info": logging.INFO,
        "warning": logging.WARNING,
        "error": logging.ERROR,
        "critical": logging.CRITICAL,
    }

    _logging_enabled = LOG
    _use_fancy_print = LOG_TO_UI
    _use_file_handler = LOG_TO_FILE

    @classmethod
    def get_logger(
        cls,
        name: str = "concordia",
        level: str = LOG_LEVEL,
        log_file: str = LOG_FILE,
    ) -> logging.Logger:
        """
        Returns the shared logger, attaching the file and console handlers on first use.
        """
        if cls._logger is None:
            cls._logger = logging.getLogger(name)
            cls._logger.setLevel(cls.LEVELS.get(level.lower(), logging.INFO))
            cls._logger.propagate = False

            if cls._use_file_handler and cls._logging_enabled:
                file_handler = logging.FileHandler(log_file)
                file_formatter = logging.Formatter(
                    "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
                )
                file_handler.setFormatter(file_formatter)
                cls._logger.addHandler(file_handler)

            if cls._use_fancy_print and cls._logging_enabled:
                cls._logger.addHandler(FancyPrintHandler())

        return cls._logger

    @classmethod
    def set_level(cls, level: str) -> None:
        """
        Changes the level of the shared logger, e.g. for --quiet or --log-level.
        """
        if level.lower() not in cls.LEVELS:
            raise ValueError(f"Unknown log level '{level}'")
        cls.get_logger().setLevel(cls.LEVELS[level.lower()])


class FancyPrintHandler(logging.Handler):
    def emit(self, record: logging.LogRecord) -> None:
        """
        Emit the log record on the stderr console with level colors.
        """
        try:
            formatted_msg = escape(f"[{record.levelname}] {self.format(record)}")
            printer(self._apply_color(formatted_msg, record.levelno))
        except Exception:
            self.handleError(record)

    def _apply_color(self, msg: str, level: int) -> str:
        color_map = {
            logging.DEBUG: "blue",
            logging.INFO: "green",
            logging.WARNING: "yellow",
            logging.ERROR: "red",
            logging.CRITICAL: "purple",
        }

        color = color_map.get(level, "white")

        return f"[{color}]{msg}[/]"
