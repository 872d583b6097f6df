import logging
import sys
import warnings

logging.captureWarnings(True)

PACKAGE = __name__.split(".")[0]

debug_log_format = "%(asctime)s - [%(levelname)s] - %(name)s - (%(filename)s).%(funcName)s(%(lineno)d) - %(message)s"
default_log_format = "%(message)s"

_LEVELS = (logging.ERROR, logging.WARNING, logging.INFO, logging.DEBUG)


def verbosity_to_loglevel(verbosity: int) -> int:
    """
    0 -> ERROR (library warnings silenced), 1 -> WARNING, 2 -> INFO, 3 and more -> DEBUG
    """
    if verbosity <= 0:
        warnings.filterwarnings("ignore")
    return _LEVELS[min(max(verbosity, 0), len(_LEVELS) - 1)]


def get_file_handler(path: str, level: int = logging.DEBUG):
    file_handler = logging.FileHandler(path)
    file_handler.setLevel(level)
    file_handler.setFormatter(logging.Formatter(debug_log_format))
    return file_handler


def get_stream_handler(stream, level=None, handler_filter=None):
    stream_handler = logging.StreamHandler(stream)
    stream_handler.setFormatter(logging.Formatter(default_log_format))

    if level:
        stream_handler.setLevel(level)

    if handler_filter:
        stream_handler.addFilter(handler_filter)

    return stream_handler


class InfoFilter(logging.Filter):
    """
    Progress messages (DEBUG, INFO) only; warnings and errors go to stderr
    """

    def filter(self, rec):
        return rec.levelno < logging.WARNING


def get_logger(name=None, level=None):
    logger = logging.getLogger(name)

    if level:
        logger.setLevel(level)

    logger.handlers.clear()
    logger.addHandler(get_stream_handler(stream=None, level=logging.WARNING))
    logger.addHandler(get_stream_handler(stream=sys.stdout, level=logging.DEBUG, handler_filter=InfoFilter()))
    logger.propagate = False

    return logger


def set_package_level(level: int, log_file: str = None):
    """
    Apply one level to every module logger of the package; they do not propagate to the root

    Args:
        level: logging level
        log_file: optional path of a debug log file shared by all module loggers

    Returns:

    """
    file_handler = get_file_handler(log_file) if log_file else None
    for name, logger in logging.Logger.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and name.split(".")[0] == PACKAGE:
            logger.setLevel(level)
            if file_handler is not None:
                logger.addHandler(file_handler)


class DuplicateFilter(logging.Filter):
    """
    Drop records whose level and text were already emitted by this logger, e.g. the same warning for every
    point of a parameter sweep
    """

    def __init__(self):
        super().__init__()
        self.seen = set()

    def filter(self, record):
        key = (record.levelno, record.getMessage())
        if key in self.seen:
            return False
        self.seen.add(key)
        return True
