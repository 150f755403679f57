"""Fan out independent computations over a pool of processes

`parallel_map` is used wherever the analysis decomposes into independent
cells: parsing conversation files, extracting prosody per conversation,
evaluating measures per (conversation, feature) and synthetic trials.
Results come back in input order, and all randomness is derived from
`cell_seed`, so the number of processes never changes a result.
"""
import multiprocessing
import functools
import traceback
import zlib

import numpy as np

from pyentrain import conf
from pyentrain import log


class WorkerTarget(object):  # pylint: disable=too-few-public-methods
    """Calls the target for one item, logging failures of the worker
    """
    def __init__(self, target):
        self.target = target
        try:
            functools.update_wrapper(self, target)
        except AttributeError:
            pass

    def __call__(self, item):
        try:
            return self.target(item)
        except Exception:
            log.error("Error in worker: %s", traceback.format_exc())
            raise


def parallel_map(function, items, n_processes=None):
    """Map `function` over `items`, in a process pool if `n_processes` > 1

    `function` and the items must be picklable when a pool is used.
    """
    items = list(items)
    if n_processes is None:
        n_processes = int(conf['pyentrain.n_processes'])
    n_processes = min(n_processes, len(items))
    if n_processes <= 1:
        return [function(item) for item in items]

    log.debug("Mapping %s over %d items in %d processes",
              getattr(function, '__name__', function),
              len(items), n_processes)
    pool = multiprocessing.Pool(processes=n_processes)
    try:
        results = pool.map(WorkerTarget(function), items)
    finally:
        pool.close()
        pool.join()
    return results


def cell_seed(seed, *keys):
    """Seed sequence for one analysis cell, e.g. (conversation, feature)
    """
    entropy = [int(seed)] + [zlib.crc32(str(key).encode('utf-8'))
                             for key in keys]
    return np.random.SeedSequence(entropy)


def cell_rng(seed, *keys):
    """Random generator of one analysis cell
    """
    return np.random.default_rng(cell_seed(seed, *keys))
