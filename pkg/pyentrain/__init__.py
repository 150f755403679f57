"""pyentrain - entrainment measures for code-switched dyadic conversations
"""
from pyentrain.version import __version__

from pyentrain.utils.Singleton import delegate_singleton

# pylint: disable=invalid-name
from pyentrain.Config import Config
conf = delegate_singleton(Config)

from pyentrain.Logger import TimingLogger
log = delegate_singleton(TimingLogger)
