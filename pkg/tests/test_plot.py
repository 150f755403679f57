"""Tests the utils.plot module of pyentrain
"""
import unittest
import tempfile
import shutil
import os

import mock
import matplotlib

from pyentrain.utils import plot
from pyentrain import log
from pyentrain import conf


class TestPlot(unittest.TestCase):
    """Test the plot module
    """
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        """Tear down the test fixture
        """
        plot._SETUP_DONE = False  # pylint: disable=protected-access
        shutil.rmtree(self.directory)
        log.reset_instance()
        conf.reset_instance()

    def test_setup_does_not_override(self):
        """Test setting up plotting once
        """
        self.assertTrue(plot.setup_plotting(override_setup=False))
        self.assertFalse(plot.setup_plotting(override_setup=False))
        self.assertTrue(plot.setup_plotting())

    def test_setup_font_size_from_conf(self):
        """Test the font size is taken from the configuration
        """
        conf.initialize(options=[('plot.font_size', '14')])
        with mock.patch.object(matplotlib, 'rc') as rc:
            plot.setup_plotting()
        rc.assert_any_call('font', size=14)

    def test_setup_option_beats_conf(self):
        """Test explicit options take precedence over the configuration
        """
        with mock.patch.object(matplotlib, 'rc') as rc:
            plot.setup_plotting({'font_size': 8})
        rc.assert_any_call('font', size=8)

    def test_bar_summary_svg(self):
        """Test a bar summary is written as svg
        """
        filename = os.path.join(self.directory, 'proximity.svg')
        plot.bar_summary_svg(filename,
                             'Proximity',
                             ['Min. pitch', 'Max. pitch'],
                             {'same gender': [76.9, None],
                              'mixed gender': [23.3, 50.0]})
        with open(filename) as infile:
            content = infile.read()
        self.assertIn('<svg', content)
        self.assertIn('Proximity', content)

    def test_bar_summary_reproducible(self):
        """Test two renderings of the same summary are identical
        """
        contents = []
        for name in ('a.svg', 'b.svg'):
            filename = os.path.join(self.directory, name)
            plot.bar_summary_svg(filename, 'Convergence', ['HNR'],
                                 {'%': [12.5]})
            with open(filename) as infile:
                contents.append(infile.read())
        self.assertEqual(contents[0], contents[1])


if __name__ == '__main__':
    unittest.main()
