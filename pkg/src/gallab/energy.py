"""Difference representation function, additive energy and multiplicative energy of r.

Everything here is exact integer arithmetic. Multiplicative quantities run
over POSITIVE differences only; ratios n/m are `fractions.Fraction` values,
which are always stored in lowest terms.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import check_int128
from .errors import InvalidArgument

# Largest key for which products k*l are formed in int64.
_INT64_PRODUCT_SAFE = 3_037_000_499  # floor(sqrt(2**63 - 1))
_ROW_CHUNK = 2048


@dataclass(frozen=True)
class RepFunction:
    """r_A restricted to positive differences: ``counts[n] = #{(a, b): a - b = n}``."""

    counts: dict
    set_size: int

    def __post_init__(self):
        if any(n < 1 or c < 1 for n, c in self.counts.items()):
            raise InvalidArgument("RepFunction keys and counts must be positive")

    def keys(self):
        return np.fromiter(self.counts.keys(), dtype=object if self._big else np.int64, count=len(self.counts))

    def values(self):
        return np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))

    @property
    def _big(self):
        return bool(self.counts) and max(self.counts) >= (1 << 62)

    @property
    def total(self):
        return sum(self.counts.values())

    def __getitem__(self, n):
        if n == 0:
            return self.set_size
        return self.counts.get(abs(n), 0)

    def __len__(self):
        return len(self.counts)


def _require_size(A, k, op):
    if len(A) < k:
        raise InvalidArgument(f"{op} needs |A| >= {k}, got {len(A)}")


def rep_function(A):
    """Positive-difference representation function of A."""
    els = A.elements
    N = len(els)
    if N < 2:
        return RepFunction({}, N)
    if els[-1] < (1 << 62):
        a = np.asarray(els, dtype=np.int64)
        iu, ju = np.triu_indices(N, k=1)
        diffs = a[ju] - a[iu]
        vals, cnt = np.unique(diffs, return_counts=True)
        counts = dict(zip(vals.tolist(), cnt.tolist()))
    else:
        counts = dict(sorted(Counter(b - a for i, a in enumerate(els) for b in els[i + 1 :]).items()))
    return RepFunction(counts, N)


def additive_energy(A):
    """E(A) = sum over all integers n of r(n)^2 = N^2 + 2 * sum_{n>0} r(n)^2."""
    r = rep_function(A)
    N = len(A)
    return N * N + 2 * sum(c * c for c in r.counts.values())


def product_aggregate(keys, weights):
    """Return ``{p: sum_{k*l = p} w(k) w(l)}`` over ordered pairs of keys.

    ``keys`` are distinct positive integers and ``weights`` integers. Uses an
    int64 numpy path when every product and partial sum provably fits, and
    exact Python integers (with a 128-bit guard) otherwise.
    """
    keys = [int(k) for k in keys]
    weights = [int(w) for w in weights]
    if not keys:
        return {}
    kmax = max(keys)
    check_int128(kmax * kmax, "product key")
    wsum = sum(abs(w) for w in weights)
    if kmax <= _INT64_PRODUCT_SAFE and wsum * wsum < (1 << 62):
        return _product_aggregate_int64(np.array(keys, dtype=np.int64), np.array(weights, dtype=np.int64))
    acc = defaultdict(int)
    for i, (k, wk) in enumerate(zip(keys, weights)):
        acc[k * k] += wk * wk
        for l, wl in zip(keys[i + 1 :], weights[i + 1 :]):
            acc[k * l] += 2 * wk * wl
    return dict(acc)


def _reduce_sorted(p, w):
    order = np.argsort(p, kind="stable")
    p, w = p[order], w[order]
    starts = np.flatnonzero(np.r_[True, p[1:] != p[:-1]])
    return p[starts], np.add.reduceat(w, starts)


def _product_aggregate_int64(k, w):
    K = len(k)
    parts_p, parts_w = [], []
    for lo in range(0, K, _ROW_CHUNK):
        hi = min(K, lo + _ROW_CHUNK)
        # upper triangle rows lo..hi: pairs (i, j) with j >= i
        P = k[lo:hi, None] * k[None, lo:]
        W = w[lo:hi, None] * w[None, lo:]
        mask = np.triu(np.ones((hi - lo, K - lo), dtype=bool))
        W = np.where(np.eye(hi - lo, K - lo, dtype=bool), W, 2 * W)
        p, q = _reduce_sorted(P[mask], W[mask])
        parts_p.append(p)
        parts_w.append(q)
    p, q = _reduce_sorted(np.concatenate(parts_p), np.concatenate(parts_w))
    return dict(zip(p.tolist(), q.tolist()))


def mult_energy_of_r(A, domain="positive"):
    """sum_{k*l = m*n} r(k) r(l) r(m) r(n) over positive differences k, l, m, n.

    Aggregates Q(p) = sum_{k*l=p} r(k) r(l) and returns sum_p Q(p)^2. Keys never
    exceed (max A - min A)^2.

    ``domain="integers"`` lets k, l, m, n range over all of Z instead, with
    r(0) = N and r(-n) = r(n): nonzero products then pick up every sign
    pattern (8 times the positive sum) and the product 0 adds
    Q(0)^2 = (2 N^3 - N^2)^2.
    """
    _require_size(A, 2, "mult_energy_of_r")
    if domain not in ("positive", "integers"):
        raise InvalidArgument(f"unknown domain {domain!r}")
    r = rep_function(A)
    Q = product_aggregate(r.counts.keys(), r.counts.values())
    total = sum(q * q for q in Q.values())
    if domain == "integers":
        N = len(A)
        total = 8 * total + (2 * N**3 - N * N) ** 2
    return total


def ratio_energy_decomposition(A):
    """Map each ratio z = n/m of positive differences to S(z) = sum_{n/m=z} r(n) r(m).

    sum_z S(z)^2 equals :func:`mult_energy_of_r`, because k*l = m*n exactly
    when k/m = n/l.
    """
    _require_size(A, 2, "ratio_energy_decomposition")
    r = rep_function(A)
    keys = list(r.counts)
    if keys[-1] > _INT64_PRODUCT_SAFE or len(A) > 3000:
        acc = defaultdict(int)
        for n, rn in r.counts.items():
            for m, rm in r.counts.items():
                acc[Fraction(n, m)] += rn * rm
        return dict(acc)
    k = np.array(keys, dtype=np.int64)
    w = np.array(list(r.counts.values()), dtype=np.int64)
    acc = defaultdict(int)
    for lo in range(0, len(k), _ROW_CHUNK):
        num = np.broadcast_to(k[lo : lo + _ROW_CHUNK, None], (min(_ROW_CHUNK, len(k) - lo), len(k)))
        den = np.broadcast_to(k[None, :], num.shape)
        g = np.gcd(num, den)
        nn, dd = (num // g).ravel(), (den // g).ravel()
        ww = (w[lo : lo + _ROW_CHUNK, None] * w[None, :]).ravel()
        order = np.lexsort((dd, nn))
        nn, dd, ww = nn[order], dd[order], ww[order]
        starts = np.flatnonzero(np.r_[True, (nn[1:] != nn[:-1]) | (dd[1:] != dd[:-1])])
        tot = np.add.reduceat(ww, starts)
        for a, b, t in zip(nn[starts].tolist(), dd[starts].tolist(), tot.tolist()):
            acc[Fraction(a, b)] += t
    return dict(acc)


def _as_fraction(z):
    if isinstance(z, tuple):
        return Fraction(*z)
    return Fraction(z)


def ratio_restricted_energy(A, Z):
    """sum over positive differences n, m with n/m in Z of r(n) r(m).

    Runs in O(|Z| * #differences): for z = p/q each m divisible by q fixes n.
    """
    _require_size(A, 2, "ratio_restricted_energy")
    r = rep_function(A).counts
    total = 0
    for z in {_as_fraction(z) for z in Z}:
        if z <= 0:
            continue
        p, q = z.numerator, z.denominator
        for m, rm in r.items():
            if m % q == 0:
                total += rm * r.get(m // q * p, 0)
    return total


def incidence_count(A, y, z):
    """#{(a, b) in A^2 : a + b*z = y}, with y and z exact rationals."""
    y, z = _as_fraction(y), _as_fraction(z)
    count = 0
    for b in A:
        a = y - b * z
        if a.denominator == 1 and a.numerator in A:
            count += 1
    return count


def incidence_profile(A, z):
    """Counter ``y -> r(y, z)`` over all N^2 pairs (a, b), y = a + b*z."""
    z = _as_fraction(z)
    return Counter(a + b * z for a in A for b in A)


def rich_point_count(A, Z, t):
    """Number of (y, z), z in Z, with r(y, z) >= t (points on at least t lines)."""
    return sum(1 for z in {_as_fraction(z) for z in Z} for c in incidence_profile(A, z).values() if c >= t)
