"""Logging and stage timing for pyentrain runs

Use the module level delegate ``pyentrain.log`` like a `logging.Logger`.
Messages logged before the command line has initialized the logger are
buffered and replayed once `TimingLogger.initialize` is called, so
nothing said while reading the configuration is lost.

The `timed` context collects wall-clock statistics per pipeline stage,
``--print-timings`` shows them after a run.
"""
import logging
import logging.handlers
import copy
import os

from collections import OrderedDict
from datetime import datetime
from contextlib import contextmanager

import numpy as np

from pyentrain.utils.Singleton import Singleton
from pyentrain.utils.Singleton import DefaultSingleton
from pyentrain.utils import printers


CONSOLE_FORMAT = ("[%(levelname)-19s] [%(relativeCreated)s]"
                  " $BOLD%(message)s$RESET")
"""The format used for logging to the console
"""

FILE_FORMAT = ("[%(relativeCreated)10.5fs] [%(levelname)-1s]"
               " %(message)-50s (%(filename)s:%(lineno)d) %(processName)s")
"""The format used for logging to file
"""

CONSOLE_STREAM_HANDLER = logging.StreamHandler()
"""The stream handler for the console (can be mocked for testing)
"""

LOG_LEVEL_ENV = 'PYENTRAIN_LOG_LEVEL'
"""Environment variable overriding the console verbosity
"""


def expand_format_tags(message, use_color=True):
    """Expand the $BOLD and $RESET tags of a format, or drop them
    """
    if use_color:
        return message.replace("$RESET", printers.RESET_SEQ).replace(
            "$BOLD", printers.COLORS['bold'])
    return message.replace("$RESET", "").replace("$BOLD", "")


def console_level(configured):
    """The console level, honouring the environment override
    """
    level = os.environ.get(LOG_LEVEL_ENV) or configured
    if isinstance(level, int):
        return level
    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        raise ValueError("Unknown log level '%s'" % level)
    return numeric


class ColorFormatter(logging.Formatter):
    """Formats records with the level name colored by severity
    """
    LEVEL_COLORS = {'WARNING': printers.COLORS['magenta'],
                    'INFO': printers.COLORS['white'],
                    'DEBUG': printers.COLORS['blue'],
                    'CRITICAL': printers.COLORS['yellow'],
                    'ERROR': printers.COLORS['red']}

    def __init__(self, msg, use_color=True):
        super(ColorFormatter, self).__init__(msg)
        self.use_color = use_color

    def format(self, record):
        record = copy.copy(record)
        if self.use_color and record.levelname in self.LEVEL_COLORS:
            record.levelname = printers.colorize(
                record.levelname, self.LEVEL_COLORS[record.levelname])
            record.relativeCreated = "%0.3fs" % (
                record.relativeCreated / 1000.0)
        else:
            record.levelname = record.levelname[0]
            record.relativeCreated = record.relativeCreated / 1000.0
        return logging.Formatter.format(self, record)


class PreInitLogHandler(logging.Handler, Singleton):
    """Keeps the records logged before the logger is initialized
    """
    def __init__(self):
        self.pre_init_logs = []
        super(PreInitLogHandler, self).__init__()

    def emit(self, record):
        self.pre_init_logs.append(record)


class TimingLogger(logging.Logger, DefaultSingleton):
    """Logger with colored console output, optional rotating log file
    and a `timed` context for stage timings.
    """
    def __init__(self,
                 console_level=logging.INFO,
                 filename=None,
                 file_level=logging.DEBUG,
                 no_backups=5):
        """Log at or above `console_level` to stderr and, if `filename`
        is given, at or above `file_level` to a file that is rotated on
        every initialization when `no_backups` > 0.
        """
        super(TimingLogger, self).__init__(
            'pyentrain', level=min(console_level, file_level))
        self.timings = OrderedDict()

        console_handler = CONSOLE_STREAM_HANDLER
        console_handler.setLevel(console_level)
        console_handler.setFormatter(
            ColorFormatter(expand_format_tags(CONSOLE_FORMAT)))
        self.addHandler(console_handler)

        if filename is not None:
            roll_over = os.path.isfile(filename)
            file_handler = logging.handlers.RotatingFileHandler(
                filename=filename, backupCount=no_backups)
            file_handler.setLevel(file_level)
            file_handler.setFormatter(ColorFormatter(FILE_FORMAT, False))
            if roll_over and no_backups > 0:
                file_handler.doRollover()
            self.addHandler(file_handler)

        for record in PreInitLogHandler.get_instance().pre_init_logs:
            for handler in self.handlers:
                if record.levelno >= handler.level:
                    handler.handle(record)
        PreInitLogHandler.reset_instance()

    @classmethod
    def _get_pseudo_instance(cls):
        """Logger that buffers records until initialization
        """
        temp_logger = logging.getLogger('pyentrain.pre_init')
        for handler in list(temp_logger.handlers):
            temp_logger.removeHandler(handler)
        temp_logger.addHandler(PreInitLogHandler.get_instance())
        temp_logger.setLevel(1)
        temp_logger.propagate = False
        temp_logger.reset_instance = cls.reset_instance
        temp_logger.close = lambda: None

        @contextmanager
        def untimed(*_args, **_kwargs):
            """No timing before initialization
            """
            yield
        temp_logger.timed = untimed
        return temp_logger

    @contextmanager
    def timed(self, msg='', level=logging.DEBUG, save_result=True):
        """Time the enclosed block, log it at `level` (unless None) and
        keep the result for `print_timings` if `save_result`.
        """
        start = datetime.now()
        yield
        elapsed_time = (datetime.now() - start).total_seconds()
        if level is not None:
            self.log(level, msg + " took %0.6fs" % elapsed_time)
        if save_result:
            self.timings.setdefault(msg, []).append(elapsed_time)

    def print_timings(self):
        """Print a summary of the timings collected with `timed`
        """
        if not self.timings:
            printers.print_blue(  # pylint: disable=no-member
                "No timings stored...")
            return

        printers.print_blue("Timing Summary:")  # pylint: disable=no-member
        for msg, times in self.timings.items():
            if len(times) > 1:
                times_array = np.array(times)
                print("\t'%s' (timed %d times): total = %0.6fs, "
                      "min = %0.6fs, max = %0.6fs, median = %0.6fs"
                      % (msg, len(times),
                         np.sum(times_array),
                         np.min(times_array),
                         np.max(times_array),
                         np.median(times_array)))
            else:
                print("\t'%s': %0.6fs" % (msg, times[0]))

    def close(self):
        """Close the handlers and drop the instance
        """
        for handler in self.handlers:
            if handler is not CONSOLE_STREAM_HANDLER:
                handler.close()
        type(self).reset_instance()
