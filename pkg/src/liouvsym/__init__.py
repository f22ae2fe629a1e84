"""Superoperator tools for symmetries of Liouville-space dynamics."""

from .liouville_space import (
    LiouvilleSubspace,
    SubspaceKind,
    SuperOp,
    classify_subspace,
    commute_residual,
    liouvillian_from_h,
    promote_left,
    promote_right,
    supercommutator,
    unvec,
    vec,
)
from .operator_core import (
    DimensionError,
    NotHermitianError,
    PauliBasis,
    commutator,
    expm,
    hermitian_eig,
    pauli,
)
from .symmetry_analysis import block_decompose, commutant_basis, dfls_check, difference_degeneracies

__version__ = "0.1.0"
