"""Finite integer sets: generators and a plain-text file format.

A set file holds one base-10 natural number per line. Whitespace-only lines
are skipped, duplicates collapse, and order does not matter.
"""

from dataclasses import dataclass
import logging
import math
import os

import numpy as np

from .errors import InvalidArgument, SetParseError

log = logging.getLogger(__name__)

MAX_ELEMENT = (1 << 63) - 1

# Recorded in experiment metadata so random sets can be regenerated.
RANDOM_SUBSET_ALGORITHM = "numpy.random.Generator(PCG64(seed)).choice(universe_max, N, replace=False) + 1, sorted"


@dataclass(frozen=True)
class IntegerSet:
    """Strictly increasing tuple of natural numbers."""

    elements: tuple

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        if not els:
            raise InvalidArgument("IntegerSet must be nonempty")
        if els[0] < 1:
            raise InvalidArgument("IntegerSet elements must be >= 1")
        if els[-1] > MAX_ELEMENT:
            raise InvalidArgument(f"IntegerSet elements must be <= 2**63 - 1, got {els[-1]}")
        if any(b <= a for a, b in zip(els, els[1:])):
            raise InvalidArgument("IntegerSet elements must be strictly increasing")
        object.__setattr__(self, "elements", els)

    @classmethod
    def from_iterable(cls, values):
        """Sort and deduplicate arbitrary natural numbers into a set."""
        return cls(tuple(sorted(set(int(v) for v in values))))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._members

    @property
    def _members(self):
        # frozen dataclass: cache the lookup set on first use
        try:
            return self.__dict__["_member_set"]
        except KeyError:
            s = frozenset(self.elements)
            object.__setattr__(self, "_member_set", s)
            return s

    @property
    def N(self):
        return len(self.elements)

    @property
    def diameter(self):
        return self.elements[-1] - self.elements[0]

    def as_array(self):
        """Elements as an int64 numpy array, or an object array if they do not fit."""
        if self.elements[-1] < (1 << 62):
            return np.array(self.elements, dtype=np.int64)
        return np.array(self.elements, dtype=object)

    def truncate(self, n):
        """The first n elements (the truncation A_N of a sequence)."""
        if not 1 <= n <= len(self):
            raise InvalidArgument(f"cannot truncate a {len(self)}-set to {n} elements")
        return IntegerSet(self.elements[:n])


def _check_positive(name, value):
    if int(value) != value or value < 1:
        raise InvalidArgument(f"{name} must be a positive integer, got {value!r}")


def gen_interval(N):
    """The interval {1, ..., N}."""
    _check_positive("N", N)
    if N > MAX_ELEMENT:
        raise InvalidArgument("N exceeds the element cap 2**63 - 1")
    return IntegerSet(tuple(range(1, N + 1)))


def gen_squares(N):
    """The first N squares {1, 4, ..., N^2}."""
    _check_positive("N", N)
    if N > math.isqrt(MAX_ELEMENT):
        raise InvalidArgument("N^2 exceeds the element cap 2**63 - 1")
    return IntegerSet(tuple(k * k for k in range(1, N + 1)))


def gen_random_subset(universe_max, N, seed):
    """Uniform random N-subset of {1, ..., universe_max}, reproducible from seed.

    See RANDOM_SUBSET_ALGORITHM for the exact sampling procedure.
    """
    _check_positive("universe_max", universe_max)
    _check_positive("N", N)
    if N > universe_max:
        raise InvalidArgument(f"cannot draw {N} distinct elements from {{1..{universe_max}}}")
    if universe_max > MAX_ELEMENT:
        raise InvalidArgument("universe_max exceeds the element cap 2**63 - 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    picks = rng.choice(universe_max, size=N, replace=False, shuffle=False)
    return IntegerSet(tuple(sorted(int(x) + 1 for x in picks)))


def parse_set(text):
    """Parse set-file text; returns ``(IntegerSet, duplicates_collapsed)``."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        token = line.strip()
        if not token:
            continue
        if not token.isdigit() or not token.isascii():
            raise SetParseError(lineno, line)
        v = int(token)
        if v < 1:
            raise SetParseError(lineno, line)
        values.append(v)
    if not values:
        raise InvalidArgument("set file contains no elements")
    uniq = sorted(set(values))
    return IntegerSet(tuple(uniq)), len(values) - len(uniq)


def load_set(path):
    """Read a set file. Collapsed duplicates are logged at WARNING level."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    A, dups = parse_set(text)
    if dups:
        log.warning("%s: collapsed %d duplicate element(s)", path, dups)
    return A


def save_set(A, path):
    """Write A in the set-file format (atomically, via a temp file)."""
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("".join(f"{x}\n" for x in A))
    os.replace(tmp, path)
