# -*- coding: utf-8 -*-
#
# pyentrain documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

try:
    from mock import MagicMock
except ImportError:
    from unittest.mock import MagicMock


ON_RTD = os.environ.get('READTHEDOCS', None) == 'True'


class Mock(MagicMock):
    @classmethod
    def __getattr__(cls, name):
        return Mock()


MOCK_MODULES = ['numpy',
                'scipy',
                'scipy.io',
                'scipy.signal',
                'scipy.stats',
                'h5py',
                'lockfile',
                'toolz',
                'matplotlib',
                'matplotlib.pyplot',
                'configobj',
                'validate',
]

sys.modules.update((mod_name, Mock()) for mod_name in MOCK_MODULES)

sys.path.insert(0, os.path.abspath('..'))

from pyentrain import __version__

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

if ON_RTD:
    extensions += ['sphinxcontrib.napoleon',]
else:
    extensions += ['sphinx.ext.napoleon',]

autosummary_generate = True

source_suffix = '.rst'

master_doc = 'index'

# General information about the project.
project = u'pyentrain'
copyright = u'2026, the pyentrain developers'

# The short X.Y version.
version = __version__
# The full version, including alpha/beta/rc tags.
release = __version__

exclude_patterns = ['_build']

pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'

html_static_path = []

htmlhelp_basename = 'pyentraindoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
  ('index', 'pyentrain.tex', u'pyentrain Documentation',
   u'the pyentrain developers', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'pyentrain', u'pyentrain Documentation',
     [u'the pyentrain developers'], 1)
]

intersphinx_mapping = {'https://docs.python.org/3/': None}
