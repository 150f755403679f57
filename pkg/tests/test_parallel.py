"""Tests the parallel module of pyentrain
"""
import unittest

import numpy as np

from pyentrain import conf
from pyentrain.parallel import parallel_map, cell_seed, cell_rng


def square(value):
    """Module level, so it pickles
    """
    return value * value


def fail(_value):
    """Always fails
    """
    raise ValueError("failure in worker")


class TestParallelMap(unittest.TestCase):
    """Test mapping over items
    """
    def tearDown(self):
        conf.reset_instance()

    def test_serial(self):
        """Test the serial map keeps the order
        """
        self.assertEqual(parallel_map(square, range(5), 1),
                         [0, 1, 4, 9, 16])

    def test_pool(self):
        """Test the pool gives the serial result
        """
        self.assertEqual(parallel_map(square, range(20), 3),
                         [value * value for value in range(20)])

    def test_default_from_conf(self):
        """Test the number of processes defaults to the configuration
        """
        conf.initialize(options=[('pyentrain.n_processes', '2')])
        self.assertEqual(parallel_map(square, [3, 4]), [9, 16])

    def test_empty(self):
        """Test mapping over nothing
        """
        self.assertEqual(parallel_map(square, [], 4), [])

    def test_worker_error_raised(self):
        """Test errors in workers reach the caller
        """
        self.assertRaises(ValueError, parallel_map, fail, [1, 2], 2)


class TestCellRng(unittest.TestCase):
    """Test the per-cell random generators
    """
    def test_reproducible(self):
        """Test the same cell gives the same draws
        """
        first = cell_rng(3, 'herring1', 'pitch_mean').random(5)
        second = cell_rng(3, 'herring1', 'pitch_mean').random(5)
        np.testing.assert_array_equal(first, second)

    def test_cells_differ(self):
        """Test different cells and seeds give different draws
        """
        base = cell_rng(3, 'herring1', 'pitch_mean').random(5)
        self.assertFalse(np.allclose(
            base, cell_rng(3, 'herring1', 'pitch_max').random(5)))
        self.assertFalse(np.allclose(
            base, cell_rng(4, 'herring1', 'pitch_mean').random(5)))

    def test_seed_sequence(self):
        """Test the seed sequence carries the seed and the keys
        """
        sequence = cell_seed(7, 'a', 1)
        self.assertIsInstance(sequence, np.random.SeedSequence)
        self.assertEqual(len(sequence.entropy), 3)
        self.assertEqual(sequence.entropy[0], 7)


if __name__ == '__main__':
    unittest.main()
