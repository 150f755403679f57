"""Defines the version of pyentrain
"""

__version__ = '0.1.0'
