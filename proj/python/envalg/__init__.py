"""Environment algebras of unitaries on H (x) K.

Operators are numpy complex arrays of shape (N*d, N*d) with the system index
outer: row = i_sys * d + i_env.
"""

import json

from ._core import (
    DEFAULT_SEED,
    CheckFailure,
    DimensionError,
    Error,
    InputError,
    NumericalFault,
    block_example,
    build_equivalent_v,
    classical_quantum_split,
    commutative_form,
    dipole_classify,
    entropy_check,
    environment_algebra,
    right_action_algebra,
    right_commutative_form,
    same_action,
    spectral_dims,
    spontaneous_emission,
    stinespring_minimal,
    swapped_pair,
)
from ._core import analyze_file as _analyze_file


def analyze(path, seed=DEFAULT_SEED, tol_rank=1e-10, tol_eq=1e-9):
    """Runs the full pipeline on an operator file and returns the report dict."""
    return json.loads(_analyze_file(str(path), seed, tol_rank, tol_eq))


__all__ = [
    "DEFAULT_SEED",
    "CheckFailure",
    "DimensionError",
    "Error",
    "InputError",
    "NumericalFault",
    "analyze",
    "block_example",
    "build_equivalent_v",
    "classical_quantum_split",
    "commutative_form",
    "dipole_classify",
    "entropy_check",
    "environment_algebra",
    "right_action_algebra",
    "right_commutative_form",
    "same_action",
    "spectral_dims",
    "spontaneous_emission",
    "stinespring_minimal",
    "swapped_pair",
]
