"""
Coefficient streams and the hook-length oracle
==============================================

Run with ``python3 demos/01_series_and_cores.py``.
"""

# the worked hook diagram: 4+3+1
from abar.partition_funcs import Partition, hook_numbers, is_t_core, brute_tcore_count
lam = Partition((4, 3, 1))
for row in hook_numbers(lam).hooks:
    print(" ".join(f"{h:2d}" for h in row))
print("t-core for t =", [t for t in range(2, 10) if is_t_core(lam, t)])

# c_t(n) from f_t^t / f_1, checked against brute force
from abar.partition_funcs import coeffs_ct
c3 = coeffs_ct(3, 16)
print("c_3:", c3.tolist())
print("brute force agrees:", c3.tolist() == [brute_tcore_count(n, 3) for n in range(16)])

# abar_t(n): phi(-q^t)^t / phi(-q), computed two ways
from abar.partition_funcs import coeffs_abar
a3 = coeffs_abar(3, 20, form="both")   # raises if the two forms disagree
print("abar_3:", a3.tolist())

# unknown coefficients are an error, never a silent zero
from abar.series_core import PrecisionError
try:
    a3[20]
except PrecisionError as e:
    print("PrecisionError:", e)

# the residue backend reaches X = 10^6 without big integers
import time
from abar.partition_funcs import coeffs_abar_mod
t0 = time.perf_counter()
s = coeffs_abar_mod(9, 8, 10**6)
print(f"abar_9 mod 8 through q^999999 in {time.perf_counter() - t0:.2f} s;",
      "last five:", s[10**6 - 5:10**6])
