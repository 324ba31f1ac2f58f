"""
From eta quotients to congruences for abar_3
============================================

B_{1,1,k} reduces to sum abar_3(n) q^(24n) modulo 2^(k+1); Hecke operators
then kill it modulo powers of 2.
"""

import numpy as np
from abar.modform_cert import verify_congruence_reduction, first_congruence_failure

print("B_{1,1,1} = sum abar_3(n) q^(24n) (mod 4) through q^2399:",
      verify_congruence_reduction("B", 1, 1, 1, 2400))
print("first failure mod 8 (modulus is sharp):", first_congruence_failure("B", 1, 1, 1, 2400, modulus=8))

# T_5 on B_{1,1,1} modulo 2
from abar.hecke import nilpotency_probe
rep = nilpotency_probe(1, [5, 7], 1, 10**5)
print("probe mod 2:", rep.verdict, "after", rep.steps_to_zero, "operator(s)")

# modulo 8 the window shrinks by a factor p each step
rep = nilpotency_probe(2, [5, 7, 11, 13], 3, 10**6)
for s in rep.steps:
    print(f"  after T_{s['prime']}: valid through q^{s['valid_through']}, {s['nonzero_coeff_count']} nonzero")
print("verdict:", rep.verdict)

# empirical size of the prime list in the congruence family
from abar.hecke import estimate_c
for d in (1, 2, 3):
    res = estimate_c(d, n_range=500)
    print(f"d={d}: zero failures from list length {res['length']} (window exhausted at {res['window_exhausted_at']})")

# why length 1 already works: abar_3(5j) vanishes mod 2 when 5 does not divide j
from abar.partition_funcs import coeffs_abar
a = np.array(coeffs_abar(3, 5 * 400).tolist(), dtype=object)
j = np.arange(400)
print("abar_3(5j) odd only at j =", [int(x) for x in j[(a[::5] % 2 == 1)]][:10])
