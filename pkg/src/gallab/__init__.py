"""gallab: GCD sums, difference energies and pair correlation, with brute-force cross-checks.

Modules
-------
sequences   finite integer sets and the set-file format
energy      r_A, additive energy, multiplicative energy of r, ratio and incidence counts
gcdsum      GCD sums by direct and divisor-decomposition evaluation
randmult    random completely multiplicative functions and their moments
paircorr    pair correlation of alpha * A modulo one
experiments / cli   the ``gal-lab`` experiment runner
"""

__version__ = "0.1.0"

from .sequences import IntegerSet, gen_interval, gen_random_subset, gen_squares, load_set, save_set
from .energy import (
    RepFunction,
    additive_energy,
    incidence_count,
    mult_energy_of_r,
    ratio_energy_decomposition,
    ratio_restricted_energy,
    rep_function,
)
from .gcdsum import (
    GcdSumReport,
    WeightFunction,
    gcd_sum_divisor,
    gcd_sum_naive,
    gcd_sum_of_differences,
    theorem4_ratio,
)
from .randmult import (
    RandMultSampler,
    dirichlet_polynomial,
    fourth_moment_exact,
    identity_check,
    moment_estimate,
    sample_X,
    zeta_X_truncated,
)
from .paircorr import (
    PairCorrResult,
    alpha_average_check,
    pair_correlation,
    subsequence_schedule,
    variance_estimate,
    variance_upper_panel,
)
from .stats import MomentEstimate
