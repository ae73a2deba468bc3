"""Seeded random streams.

Every random draw in the package comes from a PCG64 generator built from a
``numpy.random.SeedSequence``. A master seed is split into independent
streams by purpose and replicate::

    SeedSequence(entropy=seed, spawn_key=(PURPOSES[purpose], replicate))

PCG64 and SeedSequence are specified bit-for-bit by NumPy, so a given
(seed, purpose, replicate) triple yields the same numbers on every platform.
"""

import numpy as np

PURPOSES = {
    "synth": 1,
    "anchors": 2,
    "eigen": 3,
    "kmeans": 4,
    "diag": 5,
}


def stream(seed, purpose, replicate=0):
    """Return the generator for ``(seed, purpose, replicate)``."""
    if purpose not in PURPOSES:
        raise KeyError(f"unknown stream purpose {purpose!r}")
    ss = np.random.SeedSequence(int(seed), spawn_key=(PURPOSES[purpose], int(replicate)))
    return np.random.Generator(np.random.PCG64(ss))
