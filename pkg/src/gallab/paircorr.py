"""Pair correlation of dilated sequences modulo one.

F(alpha, s, N) = (1/N) #{(i, j), i != j : ||alpha (x_i - x_j)|| <= s/N},
||.|| the distance to the nearest integer. Both counting routes work on the
fractional parts u_i = {alpha x_i} and evaluate the same floating-point
predicate, so they agree exactly: a pair is close when d <= t or 1 - d <= t,
where d = |u_i - u_j| and t = s/N + BORDER_TOL.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidArgument
from .stats import estimate, map_blocks

BORDER_TOL = 1e-12


@dataclass(frozen=True)
class PairCorrResult:
    alpha: float
    s: float
    N: int
    F: float
    pairs: int  # ordered pairs counted, F = pairs / N
    borderline: int  # ordered pairs within BORDER_TOL of s/N


def frac_parts(x, alpha):
    """{alpha x} in [0, 1) for an integer array x."""
    v = alpha * np.asarray(x, dtype=np.float64)
    u = v - np.floor(v)
    u[u >= 1.0] = 0.0
    return u


def _close(d, t):
    return (d <= t) | ((1.0 - d) <= t)


def count_close_direct(u, t):
    """Ordered close pairs by the O(N^2) loop over all pairs."""
    if t >= 0.5:
        return len(u) * (len(u) - 1)
    total = 0
    for lo in range(0, len(u), 1024):
        d = np.abs(u[lo : lo + 1024, None] - u[None, :])
        c = _close(d, t)
        # drop i == j
        c[np.arange(c.shape[0]), np.arange(lo, lo + c.shape[0])] = False
        total += int(c.sum())
    return total


def _fix_upper(u, i, hi, pred):
    # hi: first j with pred false (pred true on i+1..hi-1); pred monotone
    n = len(u)
    while True:
        up = (hi < n) & pred(u[np.minimum(hi, n - 1)] - u[i])
        if not up.any():
            break
        hi = hi + up
    while True:
        down = (hi - 1 > i) & ~pred(u[np.maximum(hi - 1, 0)] - u[i])
        if not down.any():
            break
        hi = hi - down
    return hi


def count_close_sorted(u, t):
    """Ordered close pairs from sorted fractional parts, O(N log N).

    For sorted u and j > i, d = u_j - u_i grows with j, so {d <= t} is an
    initial run and {1 - d <= t} a final run of indices. A searchsorted guess
    is corrected to the exact float predicate.
    """
    n = len(u)
    if t >= 0.5:
        return n * (n - 1)
    u = np.sort(u)
    i = np.arange(n)
    hi = np.maximum(np.searchsorted(u, u + t, side="right"), i + 1)
    hi = _fix_upper(u, i, hi, lambda d: d <= t)
    first = np.maximum(np.searchsorted(u, u + (1.0 - t), side="left"), i + 1)
    # first: first j > i with 1 - d <= t; equivalently hi of the negated predicate
    first = _fix_upper(u, i, first, lambda d: (1.0 - d) > t)
    first = np.maximum(first, i + 1)
    unordered = int(np.sum(hi - i - 1)) + int(np.sum(n - first))
    return 2 * unordered


def _check_args(A, alpha, s):
    if len(A) < 2:
        raise InvalidArgument("pair correlation needs N >= 2")
    if not 0 <= alpha <= 1:
        raise InvalidArgument(f"alpha must lie in [0, 1], got {alpha}")
    if not s > 0:
        raise InvalidArgument(f"s must be positive, got {s}")


def pair_correlation(A, alpha, s, method="sorted"):
    """F(alpha, s, N) for the N-set A, by the sorted (default) or direct route."""
    _check_args(A, alpha, s)
    N = len(A)
    u = frac_parts(A.elements, alpha)
    delta = s / N
    if method not in ("sorted", "direct"):
        raise InvalidArgument(f"unknown method {method!r}")
    count = count_close_sorted if method == "sorted" else count_close_direct
    if delta >= 0.5:
        pairs, border = N * (N - 1), 0
    else:
        pairs = count(u, delta + BORDER_TOL)
        border = pairs - count(u, delta - BORDER_TOL) if delta > BORDER_TOL else pairs
    return PairCorrResult(float(alpha), float(s), N, pairs / N, pairs, border)


def expected_mean_F(N, s):
    """Exact alpha-average of F: 2 s (N-1)/N, valid for s/N < 1/2 and any N-set."""
    return 2.0 * s * (N - 1) / N


def _check_mc(A, s, samples):
    if samples < 100:
        raise InvalidArgument(f"need at least 100 samples, got {samples}")
    if not s > 0 or s / len(A) >= 0.5:
        raise InvalidArgument("need 0 < s/N < 1/2")


def F_samples(A, s, samples, seed):
    """F at i.i.d. uniform alpha in [0, 1); returns (alphas, F values)."""
    _check_mc(A, s, samples)
    alphas = map_blocks(lambda rng, size: rng.random(size), samples, seed)
    F = np.array([pair_correlation(A, float(a), s).F for a in alphas])
    return alphas, F


def alpha_average_check(A, s, samples, seed):
    """Monte Carlo mean of F over uniform alpha; compare with :func:`expected_mean_F`."""
    _, F = F_samples(A, s, samples, seed)
    return estimate(F)


def variance_estimate(A, s, samples, seed):
    """Monte Carlo estimate of the integral over alpha of |F - 2s|^2."""
    _, F = F_samples(A, s, samples, seed)
    return float(np.mean((F - 2.0 * s) ** 2))


def variance_samples(A, s, samples, seed):
    """|F - 2s|^2 at each sampled alpha, for estimates with a standard error."""
    _, F = F_samples(A, s, samples, seed)
    return (F - 2.0 * s) ** 2


def variance_upper_panel(A, s=1.0):
    """(log N / N^3) times the alpha = 1/2 GCD sum over positive differences.

    Right-hand side of the variance bound up to its implied constant; s only
    enters that constant and is accepted for symmetry with the estimators.
    """
    from .gcdsum import gcd_sum_of_differences

    if len(A) < 3:
        raise InvalidArgument("variance_upper_panel needs |A| >= 3")
    N = len(A)
    return math.log(N) / N**3 * gcd_sum_of_differences(A, 0.5).value.real


def subsequence_schedule(eta, j_max):
    """floor(e^(eta j)) for j = 1..j_max with repeats removed."""
    if not eta > 0:
        raise InvalidArgument("eta must be positive")
    if j_max < 1:
        raise InvalidArgument("j_max must be >= 1")
    out = []
    for j in range(1, j_max + 1):
        v = math.exp(eta * j)
        # e^(ln2 j) lands just below 2^j in floating point
        n = round(v) if abs(v - round(v)) <= 1e-9 * v else math.floor(v)
        if not out or n != out[-1]:
            out.append(n)
    return out
