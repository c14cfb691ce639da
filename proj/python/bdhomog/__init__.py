"""Python access to the bdhomog lattice solvers.

Every function mirrors the native one of the same name; structured results
come back as plain dicts.
"""
import functools
import json

from . import _core

__all__ = [
    "library_names",
    "oracle_profile_names",
    "exact_cell_value_1d",
    "check_integrand",
    "estimate_f_lim",
    "estimate_g_lim",
    "check_scaling_identity",
    "check_gj_identity",
    "gamma_minima_check",
    "validate_lattice_against_oracle",
    "subadditive_triples",
    "ergodic_average",
]

library_names = _core.library_names
oracle_profile_names = _core.oracle_profile_names
exact_cell_value_1d = _core.exact_cell_value_1d


def _decoded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return json.loads(fn(*args, **kwargs))

    return wrapper


check_integrand = _decoded(_core.check_integrand)
estimate_f_lim = _decoded(_core.estimate_f_lim)
estimate_g_lim = _decoded(_core.estimate_g_lim)
check_scaling_identity = _decoded(_core.check_scaling_identity)
check_gj_identity = _decoded(_core.check_gj_identity)
gamma_minima_check = _decoded(_core.gamma_minima_check)
validate_lattice_against_oracle = _decoded(_core.validate_lattice_against_oracle)
subadditive_triples = _decoded(_core.subadditive_triples)
ergodic_average = _decoded(_core.ergodic_average)
