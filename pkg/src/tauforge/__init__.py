"""Exact symmetric-function, free-fermion and tau-function computations.

Modules:

- ``scalars``: rationals, Laurent polynomials and rational functions in
  ``v = q^(1/2)``, truncated Laurent series in ``u`` with ``q = e^u``.
- ``partitions``: partitions, contents, border strips.
- ``symfun``: symmetric functions in the power-sum basis.
- ``quantumdim``: ``W_mu`` and ``W_{mu,nu}`` by several routes.
- ``fock``: truncated charged free-fermion Fock space.
- ``tau``: KP and 2-Toda tau functions and their Hirota checks.
- ``cli``: command-line entry point ``tauforge``.
"""

from .partitions import Partition
from .scalars import LaurentV, RatFunV, USeriesL, bracket, expand_u, expand_v_adic
from .symfun import SymFun, schur_in_p, skew_schur_in_p
from .quantumdim import w_one_product, w_two_key
from .tau import TauSeries, kp_tau_series, toda_tau_sequence

__version__ = "0.1.0"

__all__ = [
    "Partition",
    "LaurentV",
    "RatFunV",
    "USeriesL",
    "bracket",
    "expand_u",
    "expand_v_adic",
    "SymFun",
    "schur_in_p",
    "skew_schur_in_p",
    "w_one_product",
    "w_two_key",
    "TauSeries",
    "kp_tau_series",
    "toda_tau_sequence",
]
