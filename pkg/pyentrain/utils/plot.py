"""SVG bar summaries of the percentage tables

`setup_plotting` configures matplotlib from the ``[plot]`` section of
the configuration, `bar_summary_svg` draws one grouped bar chart. The
figures are written with a fixed hash salt and without a date so that
repeated runs produce identical files.
"""
import matplotlib
matplotlib.use('Agg')
from matplotlib import pyplot as plt  # noqa: E402 pylint: disable=C0413

import numpy as np  # noqa: E402 pylint: disable=C0413

from pyentrain import conf  # noqa: E402 pylint: disable=C0413
from pyentrain import log  # noqa: E402 pylint: disable=C0413

_SETUP_DONE = False
"""Flag indicating that matplotlib has already been set up
"""


def setup_plotting(options=None, override_setup=True):
    """Setup basic style for the figures
    """
    options = options or {}

    def option_or_conf(key, default):
        """Get a value from the options, the configuration or a default
        """
        if key in options:
            return options[key]
        return conf.get('plot.' + key, default)

    global _SETUP_DONE  # pylint: disable=global-statement
    if not override_setup and _SETUP_DONE:
        return False

    matplotlib.rc('font', size=int(option_or_conf('font_size', 10)))
    matplotlib.rc('figure', facecolor='white')
    matplotlib.rc('svg', hashsalt='pyentrain')
    _SETUP_DONE = True
    return True


def bar_summary_svg(filename, title, labels, series, ylabel='%'):
    """Write a grouped bar chart to `filename`

    `series` maps a legend entry to one value per label; None values
    (N/A cells) are drawn as empty bars.
    """
    setup_plotting(override_setup=False)
    fig, axis = plt.subplots(figsize=(max(4.0, 0.6 * len(labels) + 2), 4))
    positions = np.arange(len(labels))
    width = 0.8 / max(1, len(series))
    for number, (name, values) in enumerate(series.items()):
        heights = [np.nan if value is None else value for value in values]
        axis.bar(positions + number * width, heights, width, label=name)
    axis.set_xticks(positions + width * (len(series) - 1) / 2.0)
    axis.set_xticklabels(labels, rotation=45, ha='right')
    axis.set_ylabel(ylabel)
    axis.set_title(title)
    if len(series) > 1:
        axis.legend()
    fig.tight_layout()
    fig.savefig(filename, format='svg', metadata={'Date': None})
    plt.close(fig)
    log.debug("Wrote figure '%s'", filename)
