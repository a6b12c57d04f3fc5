"""
Pair correlation of alpha * A mod 1
===================================

For almost every alpha, F(alpha, s, N) -> 2s when A has small additive
energy. The squares do; an interval does not.
"""

import numpy as np

from gallab import gen_interval, gen_squares, pair_correlation, subsequence_schedule
from gallab.paircorr import F_samples, alpha_average_check, expected_mean_F, variance_upper_panel

sq, iv = gen_squares(1000), gen_interval(1000)
print("F at alpha = sqrt(2) - 1:", pair_correlation(sq, np.sqrt(2) - 1, 1.0).F)

# Averaging over alpha is exact for any set: 2s(N-1)/N.
for A, name in ((sq, "squares"), (iv, "interval")):
    est = alpha_average_check(A, 1.0, 2000, seed=1)
    print(f"{name}: mean F = {est.mean.real:.4f} +- {est.std_error:.4f}, exact {expected_mean_F(1000, 1.0):.4f}")

# The spread is what separates them.
for A, name in ((sq, "squares"), (iv, "interval")):
    _, F = F_samples(A, 1.0, 200, seed=2024)
    print(f"{name}: fraction with |F-2| <= 0.5: {np.mean(np.abs(F - 2) <= 0.5):.2f}, "
          f"mean |F-2|^2 = {np.mean((F - 2) ** 2):.3f}")

# The GCD-sum side of the variance bound shrinks along the squares.
for N in subsequence_schedule(np.log(2), 10)[5:]:
    print(f"N={N}: panel = {variance_upper_panel(gen_squares(N)):.4f}")
