"""Monte Carlo bookkeeping: seeded sample blocks, estimates with standard errors.

Seeding scheme: samples are processed in consecutive blocks of ``BLOCK``
samples. Block ``b`` draws from ``Generator(PCG64(SeedSequence(seed,
spawn_key=(b,))))``. The stream of sample i therefore depends only on
(seed, i // BLOCK, i % BLOCK), never on how many workers run the blocks.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
import os

import numpy as np

BLOCK = 4096
THREADS_ENV = "GAL_LAB_THREADS"


@dataclass(frozen=True)
class MomentEstimate:
    mean: complex
    std_error: float
    samples: int

    def z_score(self, target):
        """|mean - target| in units of the standard error (inf if the error is 0 and they differ)."""
        gap = abs(self.mean - target)
        if self.std_error == 0:
            return 0.0 if gap == 0 else math.inf
        return gap / self.std_error

    def within(self, target, sigmas=4.0):
        return self.z_score(target) <= sigmas


def estimate(values):
    """Sample mean and its standard error; complex values use E|x - mean|^2."""
    x = np.asarray(values)
    n = x.size
    if n < 2:
        raise ValueError("need at least two samples for a standard error")
    mean = x.mean()
    dev = x - mean
    var = float(np.sum((dev * np.conj(dev)).real)) / (n - 1)
    return MomentEstimate(complex(mean), math.sqrt(var / n), n)


def worker_count():
    """Worker threads allowed by GAL_LAB_THREADS (default: 1)."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def block_rng(seed, block):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def map_blocks(fn, samples, seed):
    """Apply ``fn(rng, size)`` to each sample block; results concatenated in block order."""
    sizes = [min(BLOCK, samples - lo) for lo in range(0, samples, BLOCK)]
    jobs = [(b, size) for b, size in enumerate(sizes)]

    def run(job):
        b, size = job
        return fn(block_rng(seed, b), size)

    workers = worker_count()
    if workers == 1 or len(jobs) == 1:
        parts = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    return np.concatenate(parts)
