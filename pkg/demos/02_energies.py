"""
Additive and multiplicative energy of the difference function
=============================================================
"""

from fractions import Fraction
import math

from gallab import additive_energy, gen_interval, gen_squares, mult_energy_of_r, ratio_energy_decomposition
from gallab.energy import incidence_profile, ratio_restricted_energy
from gallab.experiments import fit_slope

# {1,2,3}: differences 1 (twice) and 2 (once).
A = gen_interval(3)
S = ratio_energy_decomposition(A)
print("S(z) for {1,2,3}:", {str(z): v for z, v in sorted(S.items())})
print("sum S(z)^2 =", sum(v * v for v in S.values()), "=", mult_energy_of_r(A))

# Lines y = a + b z: the z-profile squared sums to N^2 + 2 S(z).
z = S and sorted(S)[0]
prof = incidence_profile(A, z)
print(f"z={z}: sum r(y,z)^2 = {sum(c * c for c in prof.values())}, N^2 + 2S(z) = {9 + 2 * S[z]}")

# Additive energy: N^3-ish for intervals, much smaller for squares.
for N in (50, 100, 200):
    print(f"N={N}: E(interval)/N^3 = {additive_energy(gen_interval(N)) / N**3:.3f}, "
          f"E(squares)/N^3 = {additive_energy(gen_squares(N)) / N**3:.3f}")

# Growth of the multiplicative energy on intervals. The fitted exponent
# approaches 6 from above slowly, as a log factor would make it.
sizes = [16, 32, 64, 128, 256, 512]
M = [mult_energy_of_r(gen_interval(N)) for N in sizes]
for N, m in zip(sizes, M):
    print(f"N={N:4d}  M={m:.4e}  M/(N^6 log N)={m / (N**6 * math.log(N)):.4f}")
print("fitted slope 16..256:", round(fit_slope(zip(sizes[:5], M[:5])), 4))
print("fitted slope 32..512:", round(fit_slope(zip(sizes[1:], M[1:])), 4))

# Restricting the ratios to a small set Z.
A = gen_interval(64)
for Z in ([1], [1, 2, "1/2"], [1, 2, 3, "1/2", "1/3", "2/3", "3/2"]):
    e = ratio_restricted_energy(A, [Fraction(x) for x in Z])
    print(f"|Z|={len(Z)}: energy/(N^3 |Z|^1/2) = {e / (64**3 * math.sqrt(len(Z))):.4f}")
