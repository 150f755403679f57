"""Setup for pyentrain
"""
import os
import sys
from setuptools import setup

ON_RTD = os.environ.get('READTHEDOCS', None) == 'True'
if ON_RTD:
    __version__ = 'master'
else:
    # Hack to avoid having to import __init__.py before pyentrain
    # is installed
    sys.path.insert(0, os.path.abspath('./pyentrain'))
    from version import __version__
    sys.path.pop(0)


def read_plain(fname):
    with open(os.path.join(os.path.dirname(__file__), fname), 'r') as infile:
        return infile.read()


LONG_DESCRIPTION = 'Entrainment measures for code-switched conversations.'
if os.path.exists('README.rst'):
    LONG_DESCRIPTION = read_plain('README.rst')

setup(
    name="pyentrain",
    version=__version__,
    description="Measure entrainment in code-switched dyadic conversations.",
    license="MIT",
    keywords="speech entrainment code-switching prosody",
    packages=['pyentrain',
              'pyentrain.utils'],
    package_data={'pyentrain': ['data/*.txt']},
    long_description=LONG_DESCRIPTION,
    python_requires='>=3.7',
    install_requires=[
        'configobj',
        'numpy>=1.17',
        'scipy',
        'h5py',
        'matplotlib',
        'mock',
        'lockfile',
        'toolz'
    ],
    entry_points={
        'console_scripts': ['pyentrain = pyentrain.cli:run'],
    },
    test_suite='tests',
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Topic :: Scientific/Engineering",
        "License :: OSI Approved :: MIT License",
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: Implementation :: CPython',
    ],
)
