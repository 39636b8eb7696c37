"""Finite spaces of homogeneous type.

Thin wrappers over the compiled module: analyses come back as dicts with the
same fields as the CLI reports.
"""

import json

from ._homtype import (
    Error,
    InvariantViolation,
    Refusal,
    SchemaError,
    Space,
    __version__,
    delta_ball,
    delta_table,
    generate,
    run_cli,
)
from . import _homtype as _core

__all__ = [
    "Error",
    "InvariantViolation",
    "Refusal",
    "SchemaError",
    "Space",
    "__version__",
    "delta_ball",
    "delta_table",
    "dimension",
    "generate",
    "normality_constants",
    "regularity",
    "run_cli",
    "small_measure_cover",
    "structure_constants",
]


def structure_constants(space, seed=0):
    return json.loads(_core.structure_constants(space, seed))


def normality_constants(space, F=None, r_lo=0.0, r_hi=0.0):
    return json.loads(_core.normality_constants(space, F, r_lo, r_hi))


def dimension(space, F=None, flavor="metric", method="regression", centers_in_target=False):
    return json.loads(_core.dimension(space, F, flavor, method, centers_in_target))


def regularity(space, F, nu, s, flavor="metric", exhaustive=False, r_lo=0.0, r_hi=0.0, local=False):
    return json.loads(_core.regularity(space, F, list(nu), s, flavor, exhaustive, r_lo, r_hi, local))


def small_measure_cover(space, G, rho):
    return json.loads(_core.small_measure_cover(space, G, rho))
