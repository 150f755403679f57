"""Coloured console output for the command line and the console logger

Besides the ``print_<color>`` printers generated below, `print_table`
renders rows as an aligned plain-text table, which is how the commands
show their summaries on the terminal.
"""
import sys

RESET_SEQ = "\033[0m"
"""Sequence used to reset console formatting
"""

COLOR_SEQ = "\033[1;%dm"
"""Sequence used to set color for console formatting
"""

COLORS = {
    'black': COLOR_SEQ % 30,
    'red': COLOR_SEQ % 31,
    'green': COLOR_SEQ % 32,
    'yellow': COLOR_SEQ % 33,
    'blue': COLOR_SEQ % 34,
    'magenta': COLOR_SEQ % 35,
    'cyan': COLOR_SEQ % 36,
    'white': COLOR_SEQ % 37,
    'bold': "\033[1m"
}


def colorize(string, color_s):
    """Wrap a string in a color sequence
    """
    return color_s + string + RESET_SEQ


def _print_color(color, string, *args):
    """Print a %-formatted string in color to stdout
    """
    print(colorize(string % args, color))


def _create_printer(color):
    """Creates the printer for the corresponding color
    """
    return lambda string, *args: _print_color(color, string, *args)


for _color_name, _color_seq in COLORS.items():
    vars()['print_' + _color_name] = _create_printer(_color_seq)


def print_table(header, rows, stream=None):
    """Print rows of strings as a left-aligned table with a bold header
    """
    stream = stream or sys.stdout
    rows = [[str(cell) for cell in row] for row in rows]
    widths = [len(str(title)) for title in header]
    for row in rows:
        widths = [max(width, len(cell)) for width, cell in zip(widths, row)]

    def line(cells):
        """Format one line of the table
        """
        return "  ".join(cell.ljust(width)
                         for cell, width in zip(cells, widths)).rstrip()

    stream.write(colorize(line([str(title) for title in header]),
                          COLORS['bold']) + "\n")
    for row in rows:
        stream.write(line(row) + "\n")
