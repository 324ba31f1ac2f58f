"""
Certifying the B and D eta quotients
====================================

Weight, level, character and every cusp order, straight from the exponent map.
"""

from abar.modform_cert import build_B, build_D, certify, minimal_level, stated_level, verify_L_cases

B = build_B(1, 1, 1)
print("B_{1,1,1} exponents:", B.terms)
cert = certify(B)
print("weight", cert.weight, "level", cert.level, "holomorphic", cert.holomorphic)
print("character: Kronecker symbol of", cert.kronecker_argument)

# cusp orders, one per divisor of the level (the formula depends on d only)
for c in cert.cusps[:12]:
    print(f"  d={c.d:4d}  order={c.order(cert.level)}")
print("zero order at", cert.zero_order_divisors())

# the stated levels are admissible; the minimal one can be smaller
for k in (1, 2, 3):
    E = build_B(1, 5, k)
    print(f"B_(1,5,{k}): minimal level {minimal_level(E)}, stated {stated_level('B', 1, 5)}")

# case analysis of the holomorphy quantity L
rep = verify_L_cases("D", 0, 5, 1)
print("D_(0,5,1) L checks pass:", rep.ok, " L = 0 at", rep.zero_divisors)

# half-integral weight is refused, poles are reported
from abar.series_core import EtaQuotient
print("eta^-24 holomorphic?", certify(EtaQuotient({1: -24})).holomorphic)
