"""
How fast does abar_t(n) become divisible by M?
==============================================

Finite-X density ratios.  These are measurements, not limits.
"""

from abar.density import density_reports, congruence_scan, primitive_candidates

jobs = [(t, M) for t in (3, 9, 15) for M in (2, 4, 8, 3, 9)]
print(f"{'t':>3} {'M':>3}  {'X=10^3':>9} {'X=10^4':>9} {'X=10^5':>9}  tag")
for rep in density_reports(jobs):
    ratios = " ".join(f"{float(r):9.5f}" for r in rep.ratios)
    print(f"{rep.t:>3} {rep.modulus:>3}  {ratios}  {rep.tag}")

# M = 2 is degenerate: phi(-q) = 1 mod 2, so abar_t(n) is even for every n >= 1
# and the literal ratio count/X is exactly 1 at every X.

# arithmetic progressions where abar_5 vanishes mod 5
cands = congruence_scan(5, 5, 25, 20000)
for c in primitive_candidates(cands):
    print(f"abar_5({c.A}n+{c.B}) = 0 mod 5: {c.status}")
