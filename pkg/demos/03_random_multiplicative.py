"""
Random multiplicative functions
===============================

X(p) uniform on the circle, extended completely multiplicatively. The second
moment of a Dirichlet polynomial is exactly its l2 norm squared, and the
truncated zeta times D has a closed-form mean square.
"""

import numpy as np

from gallab import RandMultSampler, WeightFunction, gen_interval, identity_check, moment_estimate, sample_X
from gallab.randmult import dirichlet_moment_estimate, second_moment_exact
from gallab.sequences import gen_random_subset

X = RandMultSampler(seed=1, T=100)
print("X(6) =", sample_X(X, 6), " X(2)X(3) =", sample_X(X, 2) * sample_X(X, 3))

f = WeightFunction.from_rep(gen_random_subset(1000, 10, 3))
est = dirichlet_moment_estimate(f, 50_000, seed=0)
print(f"E|D|^2 = {est.mean.real:.3f} +- {est.std_error:.3f}, exact {f.l2sq}")

f = WeightFunction.indicator(gen_interval(20))
for alpha in (0.6, 0.75, 1.0):
    ic = identity_check(f, alpha, 1000, 50_000, seed=0)
    print(f"alpha={alpha}: E|zeta_T D|^2 = {ic.estimate.mean.real:.3f} +- {ic.estimate.std_error:.3f}, "
          f"reference {ic.reference:.3f}, z={ic.z_score:.2f}")

# Higher moments of the truncated zeta grow fast in l; only l = 1 has a simple exact value.
for l in (1, 1.5, 2, 3):
    m = moment_estimate(0.75, l, 1000, 20_000, seed=5)
    extra = f", exact {np.log(second_moment_exact(0.75, 1000)):.3f}" if l == 1 else ""
    print(f"l={l}: log E|zeta_T(0.75)|^(2l) = {np.log(m.mean.real):.3f}{extra}")
