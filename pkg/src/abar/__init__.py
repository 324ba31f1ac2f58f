"""q-series tools for the t-core analogue abar_t(n).

Submodules:

* ``series_core``: truncated power series, exact or modulo M
* ``partition_funcs``: c_t(n), abar_t(n) and the hook-length oracle
* ``modform_cert``: eta-quotient certificates and the B/D families
* ``hecke``: Hecke operators and congruence experiments
* ``density``: arithmetic densities and congruence scans
* ``cli``: the ``abar`` command
"""
__version__ = "0.1.0"

from .series_core import (  # noqa: F401
    EtaQuotient,
    PowerSeries,
    euler_product,
    eta_quotient_expand,
    phi_neg,
    ps_inv,
    ps_mul,
    ps_pow,
    reduce_mod,
    series_equal_mod,
)
from .partition_funcs import (  # noqa: F401
    Partition,
    brute_tcore_count,
    coeffs_abar,
    coeffs_abar_mod,
    coeffs_ct,
    hook_numbers,
    is_t_core,
)
from .modform_cert import build_B, build_D, certify, minimal_level  # noqa: F401
from .density import congruence_scan, density_report  # noqa: F401
