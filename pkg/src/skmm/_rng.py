"""Seeded random streams.

Every random draw in the package comes from numpy's PCG64 bit generator,
seeded through a ``SeedSequence`` built from the user seed plus a tuple of
integer keys. Distinct keys give statistically independent substreams, so
e.g. the sketch and the sampler of one SkMM run never share draws.
"""

import numpy as np

# substream keys
SKETCH = 1
INIT = 2
SAMPLE = 3
CV = 4
PAD = 5


def generator(seed, *keys):
    seed = int(seed)
    if seed < 0:
        raise ValueError("seeds must be non-negative")
    entropy = [seed & 0xFFFFFFFFFFFFFFFF, *[int(k) for k in keys]]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
