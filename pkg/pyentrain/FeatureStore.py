"""Cache of extracted prosody features in an HDF5 file

Pitch tracking and period detection dominate the run time of an
analysis. The `FeatureStore` keeps the per-utterance prosody matrix of
each conversation in a gzip-compressed dataset, tagged with a
fingerprint of the recording and of the DSP parameters. A dataset whose
fingerprint does not match is treated as absent and re-extracted.

Access is guarded by a `lockfile.FileLock`, use the store in a ``with``
block.
"""
import os
import hashlib

import h5py
import lockfile
import numpy as np

from pyentrain import log
from pyentrain.errors import FeatureCacheError


def audio_fingerprint(path, parameters):
    """Fingerprint of a recording and the extraction parameters
    """
    stat = os.stat(path)
    text = "%s|%d|%d|%s" % (os.path.abspath(path), stat.st_size,
                            int(stat.st_mtime),
                            ",".join("%s=%r" % item
                                     for item in sorted(parameters.items())))
    return hashlib.sha1(text.encode('utf-8')).hexdigest()


class FeatureStore(object):
    """Locked access to the feature cache file
    """
    LOCK_TIMEOUT = 10
    """Maximal time in seconds allowed to acquire the cache file's lock
    """

    COMPRESSION_LEVEL = 5
    """Gzip level of the cached datasets
    """

    GROUP = 'prosody'

    def __init__(self, filename):
        self.filename = filename
        self.store_lock = None

    def lock(self):
        """Lock the cache file
        """
        self.store_lock = lockfile.FileLock(self.filename)
        try:
            self.store_lock.acquire(timeout=self.LOCK_TIMEOUT)
        except lockfile.LockTimeout:
            self.store_lock = None
            raise FeatureCacheError(
                "Cannot acquire lock on feature cache ('%s'), check if"
                " another process is using it" % self.filename)

    def unlock(self):
        """Unlock the cache file
        """
        self.store_lock.release()
        self.store_lock = None

    def __enter__(self):
        self.lock()
        return self

    def __exit__(self, *args, **kwargs):
        if self.store_lock is not None:
            self.unlock()

    def load(self, conversation_id, fingerprint):
        """The cached matrix of a conversation, None if absent or stale
        """
        if not os.path.isfile(self.filename):
            return None
        with h5py.File(self.filename, 'r') as h5file:
            name = "%s/%s" % (self.GROUP, conversation_id)
            if name not in h5file:
                return None
            dataset = h5file[name]
            if dataset.attrs.get('fingerprint') != fingerprint:
                log.debug("Stale cached features for '%s'", conversation_id)
                return None
            return np.array(dataset)

    def save(self, conversation_id, fingerprint, matrix):
        """Store the matrix of a conversation, replacing older entries
        """
        try:
            with h5py.File(self.filename, 'a') as h5file:
                group = h5file.require_group(self.GROUP)
                if conversation_id in group:
                    del group[conversation_id]
                dataset = group.create_dataset(
                    conversation_id,
                    data=np.asarray(matrix, dtype=float),
                    compression='gzip',
                    compression_opts=self.COMPRESSION_LEVEL,
                    shuffle=True)
                dataset.attrs['fingerprint'] = fingerprint
        except IOError as err:
            raise IOError("Cannot save features to '%s' (err: '%s')"
                          % (self.filename, err))
        log.debug("Cached features of '%s' in '%s'",
                  conversation_id, self.filename)
