"""Certified computations over complete discretely valued rings and their Tate algebras."""
from __future__ import annotations

from .bass import bass_r, bass_s, fitting_split, laurent_unit_split, reduce_to_linear
from .errors import (FactorizationFailure, InsufficientPrecision, InvalidInput, NotInvertible,
                     TatekError, WindowOverflow)
from .kgroups import (k0_an_pi0, k1cont_level, kv1_certify_trivial, kv1_class, tame_symbol,
                      unit_group)
from .linalg import Mat
from .matgroup import elementary_factorization, glrho_certificate, invert, mat_norm
from .padic_core import AdicScalar, DualScalar, NormExponent, RingDescriptor, TateScalar, val
from .serialize import input_hash, matrix_from_json, scalar_from_json
from .suites import SUITES, run_suite
from .tate_series import LaurentElement, TateSeries
from .witt import WittVector, pi_ideal_membership, teichmuller, teichmuller_pi, witt_add, witt_mul

__version__ = "0.1.0"

__all__ = [
    "AdicScalar", "DualScalar", "NormExponent", "RingDescriptor", "TateScalar", "val",
    "TateSeries", "LaurentElement", "Mat", "mat_norm", "invert", "glrho_certificate",
    "elementary_factorization", "unit_group", "k1cont_level", "tame_symbol", "k0_an_pi0",
    "kv1_certify_trivial", "kv1_class", "WittVector", "witt_add", "witt_mul", "teichmuller",
    "teichmuller_pi", "pi_ideal_membership", "laurent_unit_split", "bass_s", "bass_r",
    "reduce_to_linear", "fitting_split", "input_hash", "matrix_from_json", "scalar_from_json",
    "SUITES", "run_suite", "TatekError", "InvalidInput", "InsufficientPrecision",
    "NotInvertible", "WindowOverflow", "FactorizationFailure",
]
