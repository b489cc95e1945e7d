"""
Counter-based random streams.

Every random quantity in a run is drawn from a Philox generator keyed by
(seed, domain, index), so the numbers a draw sees never depend on which thread
produced it or in which order draws were scheduled.
"""

from typing import Literal

import numpy as np

StreamDomain = Literal["training", "fresh", "observed", "replication", "posterior", "holdout"]

DOMAIN_CODES = {
    "training": 0,
    "fresh": 1,
    "observed": 2,
    "replication": 3,
    "posterior": 4,
    "holdout": 5,
}


def draw_stream(seed: int, domain: StreamDomain, index: int = 0) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(DOMAIN_CODES[domain], index))
    return np.random.Generator(np.random.Philox(sequence))


def child_seed(seed: int, domain: StreamDomain, index: int) -> int:
    """A 64-bit seed for a nested run (e.g. one replication of an experiment)."""
    sequence = np.random.SeedSequence(seed, spawn_key=(DOMAIN_CODES[domain], index))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
