"""Random completely multiplicative functions on the unit circle.

X(p) are independent and uniform on |z| = 1, X(n) = prod X(p)^k over p^k || n.
Random zeta values are truncated to zeta_T(alpha) = sum_{n <= T} X(n) n^(-alpha);
all exact references below are for that finite sum.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .arith import check_int128, primes_up_to, spf_sieve
from .energy import product_aggregate
from .errors import InvalidArgument, OutOfRange
from .gcdsum import WeightFunction
from .stats import estimate, map_blocks

TWO_PI = 2.0 * math.pi


@lru_cache(maxsize=16)
def _factor_plan(T):
    """Evaluation plan for angles of 2..T, grouped by number of prime factors.

    Each level is (ns, parents, prime_index) with n = parent * p, and parent in an
    earlier level (or 1).
    """
    spf = np.asarray(spf_sieve(T)[: T + 1], dtype=np.int64)
    primes = primes_up_to(T)
    pindex = np.full(T + 1, -1, dtype=np.int64)
    pindex[primes] = np.arange(len(primes))
    omega = np.zeros(T + 1, dtype=np.int64)
    for n in range(2, T + 1):
        omega[n] = omega[n // spf[n]] + 1
    levels = []
    for k in range(1, int(omega.max()) + 1 if T >= 2 else 1):
        ns = np.flatnonzero(omega == k)
        ns = ns[ns >= 2]
        levels.append((ns, ns // spf[ns], pindex[spf[ns]]))
    return primes, levels


def _angles(theta, T):
    """Angles of X(1..T) (column n-1) from prime phases theta of shape (batch, pi(T))."""
    _, levels = _factor_plan(T)
    ang = np.zeros((theta.shape[0], T + 1))
    for ns, parents, pidx in levels:
        ang[:, ns] = ang[:, parents] + theta[:, pidx]
    return ang[:, 1:]


def _draw_phases(rng, size, n_primes):
    return rng.uniform(0.0, TWO_PI, size=(size, n_primes))


@dataclass(frozen=True)
class RandMultSampler:
    """One realisation of X on 1..T, drawn from ``seed``."""

    seed: int
    T: int
    phases: np.ndarray = field(init=False, repr=False, compare=False)
    primes: np.ndarray = field(init=False, repr=False, compare=False)
    _X: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.T < 1:
            raise InvalidArgument("truncation T must be >= 1")
        primes, _ = _factor_plan(self.T)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))
        theta = _draw_phases(rng, 1, len(primes))
        X = np.exp(1j * _angles(theta, self.T))[0]
        for name, val in (("phases", theta[0]), ("primes", primes), ("_X", X)):
            val.flags.writeable = False
            object.__setattr__(self, name, val)

    def phase(self, p):
        """Angle of X(p) in [0, 2 pi)."""
        i = np.searchsorted(self.primes, p)
        if i >= len(self.primes) or self.primes[i] != p:
            raise InvalidArgument(f"{p} is not a prime <= {self.T}")
        return float(self.phases[i])

    def values(self):
        """X(1..T) as a read-only complex array."""
        return self._X


def sample_X(sampler, n):
    """X(n) for 1 <= n <= T."""
    if not 1 <= n <= sampler.T:
        raise OutOfRange(f"n = {n} outside 1..{sampler.T}")
    return complex(sampler._X[n - 1])


def zeta_X_truncated(sampler, alpha):
    """sum_{n <= T} X(n) n^(-alpha)."""
    n = np.arange(1, sampler.T + 1, dtype=np.float64)
    return complex(np.sum(sampler._X * n ** (-alpha)))


def _support_arrays(f, T):
    keys = np.asarray(f.keys, dtype=np.int64)
    if keys[-1] > T:
        raise OutOfRange(f"support element {keys[-1]} exceeds truncation {T}")
    return keys, f.values


def dirichlet_polynomial(sampler, f):
    """D(X) = sum_n f(n) X(n)."""
    keys, vals = _support_arrays(f, sampler.T)
    return complex(np.sum(vals * sampler._X[keys - 1]))


def fourth_moment_exact(f):
    """E|D(X)|^4 = sum_{ab=cd} f(a) f(b) conj(f(c) f(d)) = sum_p |sum_{ab=p} f(a) f(b)|^2.

    Integer-valued f is aggregated exactly; otherwise in complex floating point.
    """
    keys, vals = f.keys, f.values
    check_int128(keys[-1] * keys[-1], "product key")
    if np.all(vals.imag == 0) and np.all(vals.real == np.round(vals.real)) and np.max(np.abs(vals.real)) < 2**31:
        Q = product_aggregate(keys, [int(v.real) for v in vals])
        return complex(sum(q * q for q in Q.values()), 0.0)
    if keys[-1] > 3_037_000_499:
        acc = {}
        for i, a in enumerate(keys):
            for j, b in enumerate(keys):
                acc[a * b] = acc.get(a * b, 0j) + vals[i] * vals[j]
        q = np.array(list(acc.values()))
    else:
        k = np.asarray(keys, dtype=np.int64)
        P = (k[:, None] * k[None, :]).ravel()
        W = (vals[:, None] * vals[None, :]).ravel()
        order = np.argsort(P, kind="stable")
        P, W = P[order], W[order]
        starts = np.flatnonzero(np.r_[True, P[1:] != P[:-1]])
        q = np.add.reduceat(W, starts)
    return complex(math.fsum((q.real**2 + q.imag**2).tolist()), 0.0)


def harmonic_partial(m, two_alpha):
    """sum_{k=1}^{m} k^(-two_alpha) for an array of nonnegative integers m."""
    m = np.asarray(m, dtype=np.int64)
    top = int(m.max()) if m.size else 0
    cums = np.concatenate([[0.0], np.cumsum(np.arange(1, top + 1, dtype=np.float64) ** (-two_alpha))])
    return cums[m]


def truncated_reference(f, alpha, T):
    """Exact E|zeta_T(alpha) D(X)|^2.

    X(n1) X(a) = X(n2) X(b) in mean exactly when n1 a = n2 b, i.e. n1 = k b/g and
    n2 = k a/g with g = (a, b), giving
    sum_{a,b} f(a) conj(f(b)) (g^2/ab)^alpha sum_{k <= T g / max(a,b)} k^(-2 alpha).
    """
    keys, vals = _support_arrays(f, T)
    a, b = keys[:, None], keys[None, :]
    g = np.gcd(a, b)
    kern = np.power((g / a) * (g / b), alpha)
    H = harmonic_partial((T * g) // np.maximum(a, b), 2.0 * alpha)
    terms = (vals[:, None] * np.conj(vals[None, :])).real * kern * H
    return math.fsum(terms.ravel().tolist())


def _check_samples(samples):
    if samples < 100:
        raise InvalidArgument(f"need at least 100 samples, got {samples}")


@dataclass(frozen=True)
class IdentityCheck:
    estimate: object  # MomentEstimate of |zeta_T D|^2
    reference: float

    @property
    def z_score(self):
        return self.estimate.z_score(self.reference)

    def passed(self, sigmas=4.0):
        return self.estimate.within(self.reference, sigmas)


def _block_sampler(T):
    primes, _ = _factor_plan(T)

    def draw(rng, size):
        return np.exp(1j * _angles(_draw_phases(rng, size, len(primes)), T))

    return draw


def identity_check(f, alpha, T, samples, seed):
    """Monte Carlo E|zeta_T(alpha) D(X)|^2 against :func:`truncated_reference`."""
    _check_samples(samples)
    if alpha <= 0.5:
        raise InvalidArgument("identity_check needs alpha > 1/2")
    keys, vals = _support_arrays(f, T)
    draw = _block_sampler(T)
    weights = np.arange(1, T + 1, dtype=np.float64) ** (-alpha)

    def block(rng, size):
        X = draw(rng, size)
        return np.abs((X @ weights) * (X[:, keys - 1] @ vals)) ** 2

    vals_mc = map_blocks(block, samples, seed)
    return IdentityCheck(estimate(vals_mc), truncated_reference(f, alpha, T))


def dirichlet_moment_estimate(f, samples, seed, power=2):
    """Monte Carlo E|D(X)|^power (power 2 has exact value ||f||_2^2)."""
    _check_samples(samples)
    keys, vals = f.keys, f.values
    T = keys[-1]
    draw = _block_sampler(T)
    idx = np.asarray(keys, dtype=np.int64) - 1

    def block(rng, size):
        return np.abs(draw(rng, size)[:, idx] @ vals) ** power

    return estimate(map_blocks(block, samples, seed))


def moment_estimate(alpha, l, T, samples, seed):
    """Monte Carlo E|zeta_T(alpha)|^(2l), real l >= 1, via exp(l ln |zeta_T|^2)."""
    _check_samples(samples)
    if alpha <= 0.5:
        raise InvalidArgument("moment_estimate needs alpha > 1/2")
    if l < 1:
        raise InvalidArgument("moment_estimate needs l >= 1")
    draw = _block_sampler(T)
    weights = np.arange(1, T + 1, dtype=np.float64) ** (-alpha)

    def block(rng, size):
        sq = np.abs(draw(rng, size) @ weights) ** 2
        with np.errstate(divide="ignore"):
            return np.where(sq > 0, np.exp(l * np.log(sq)), 0.0)

    return estimate(map_blocks(block, samples, seed))


def second_moment_exact(alpha, T):
    """E|zeta_T(alpha)|^2 = sum_{n <= T} n^(-2 alpha)."""
    return math.fsum((np.arange(1, T + 1, dtype=np.float64) ** (-2.0 * alpha)).tolist())
