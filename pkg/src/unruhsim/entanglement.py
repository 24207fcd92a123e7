"""Entanglement diagnostics: density matrices, partial transpose, negativity, entropy.

The density matrix is built over the populated occupation vectors only; the
transported states live on a thin diagonal of the full product basis, so a
naive (N+1)^modes basis would be intractable while the populated one stays
tiny. The partial transpose is evaluated on the product closure of the
populated side-A and side-B projections, which is where its off-diagonal
support lands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, ResourceError, ZeroProbabilityError
from .fock import FockState, ModeId
from .measurement import P_FLOOR

#: Largest dense basis (populated or closure) we will eigensolve.
DENSE_BASIS_CAP = 4096

#: Eigenvalues above this negative band count as numerical noise, not negativity.
NEGATIVE_EIGENVALUE_TOL = 1e-10

#: Schmidt weights below this floor are dropped from entropy sums.
_ENTROPY_WEIGHT_FLOOR = 1e-15


@dataclass(frozen=True)
class DensityMatrix:
    """Dense Hermitian matrix over an explicit occupation basis with a bipartition.

    ``side_a`` holds the registry positions assigned to side A; the rest are
    side B. A partial transpose output reuses this container and may be
    non-positive.
    """

    modes: tuple[ModeId, ...]
    basis: tuple[tuple[int, ...], ...]
    matrix: np.ndarray
    side_a: tuple[int, ...]


@dataclass(frozen=True)
class EntanglementReport:
    """PPT and entropy diagnostics for one bipartition of a pure state."""

    ppt_min_eigenvalue: float
    negativity: float
    entropy_bits: float
    concurrence: float | None = None


def _split_indices(state: FockState, side_a_modes: Sequence[ModeId]) -> tuple[int, ...]:
    side_a = tuple(state.mode_index(m) for m in side_a_modes)
    if not side_a:
        raise ConfigurationError("side A of a bipartition must be non-empty")
    if len(set(side_a)) != len(side_a):
        raise ConfigurationError("side A lists a mode twice")
    if len(side_a) == len(state.modes):
        raise ConfigurationError("side A must be a proper subset of the registry")
    return side_a


def density_matrix(
    state: FockState,
    side_a_modes: Sequence[ModeId],
    dense_cap: int = DENSE_BASIS_CAP,
) -> DensityMatrix:
    """Outer product |state><state| over the populated occupation vectors."""
    side_a = _split_indices(state, side_a_modes)
    basis = tuple(sorted(state.amplitudes))
    if len(basis) > dense_cap:
        raise ResourceError(
            f"populated basis of size {len(basis)} exceeds the dense cap {dense_cap}"
        )
    vec = np.array([state.amplitudes[occ] for occ in basis], dtype=complex)
    norm2 = float(np.vdot(vec, vec).real)
    if norm2 <= 0.0:
        raise DomainError("cannot form a density matrix from a zero state")
    vec /= math.sqrt(norm2)
    return DensityMatrix(state.modes, basis, np.outer(vec, vec.conjugate()), side_a)


def _project(occ: tuple[int, ...], positions: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(occ[p] for p in positions)


def _compose(
    alpha: tuple[int, ...],
    beta: tuple[int, ...],
    side_a: tuple[int, ...],
    side_b: tuple[int, ...],
    width: int,
) -> tuple[int, ...]:
    occ = [0] * width
    for p, n in zip(side_a, alpha):
        occ[p] = n
    for p, n in zip(side_b, beta):
        occ[p] = n
    return tuple(occ)


def partial_transpose(rho: DensityMatrix, dense_cap: int = DENSE_BASIS_CAP) -> DensityMatrix:
    """Transpose the side-A indices: <i;j| rho_PT |k;l> = <k;j| rho |i;l>.

    The output basis is the product closure of the side-A and side-B
    projections that appear in the input basis, since that is where the
    partially transposed matrix has support. Hermiticity and trace carry over.
    """
    width = len(rho.modes)
    side_a = rho.side_a
    side_b = tuple(p for p in range(width) if p not in side_a)
    a_parts = sorted({_project(occ, side_a) for occ in rho.basis})
    b_parts = sorted({_project(occ, side_b) for occ in rho.basis})
    dim = len(a_parts) * len(b_parts)
    if dim > dense_cap:
        raise ResourceError(
            f"partial-transpose closure of size {dim} exceeds the dense cap {dense_cap}"
        )
    closure = tuple(
        _compose(alpha, beta, side_a, side_b, width) for alpha in a_parts for beta in b_parts
    )
    index = {occ: i for i, occ in enumerate(closure)}
    in_index = {occ: i for i, occ in enumerate(rho.basis)}
    out = np.zeros((dim, dim), dtype=rho.matrix.dtype)
    for occ_row in rho.basis:
        i_row = in_index[occ_row]
        alpha_row = _project(occ_row, side_a)
        beta_row = _project(occ_row, side_b)
        for occ_col in rho.basis:
            value = rho.matrix[i_row, in_index[occ_col]]
            if value == 0:
                continue
            alpha_col = _project(occ_col, side_a)
            beta_col = _project(occ_col, side_b)
            r = index[_compose(alpha_col, beta_row, side_a, side_b, width)]
            c = index[_compose(alpha_row, beta_col, side_a, side_b, width)]
            out[r, c] = value
    return DensityMatrix(rho.modes, closure, out, side_a)


def _hermitian_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    if np.all(matrix.imag == 0.0):
        return np.linalg.eigvalsh(matrix.real)
    return np.linalg.eigvalsh(matrix)


def negativity_from_eigenvalues(
    eigenvalues: np.ndarray, tol: float = NEGATIVE_EIGENVALUE_TOL
) -> float:
    """Sum of |eigenvalue| over eigenvalues below the negative noise band."""
    negatives = eigenvalues[eigenvalues < -tol]
    return float(-negatives.sum())


def schmidt_entropy_bits(state: FockState, side_a_modes: Sequence[ModeId]) -> float:
    """Entanglement entropy of a pure state across the bipartition, in bits.

    Singular values of the amplitude matrix (side-A projections by side-B
    projections) give the Schmidt weights directly.
    """
    side_a = _split_indices(state, side_a_modes)
    width = len(state.modes)
    side_b = tuple(p for p in range(width) if p not in side_a)
    a_parts = sorted({_project(occ, side_a) for occ in state.amplitudes})
    b_parts = sorted({_project(occ, side_b) for occ in state.amplitudes})
    a_index = {p: i for i, p in enumerate(a_parts)}
    b_index = {p: i for i, p in enumerate(b_parts)}
    mat = np.zeros((len(a_parts), len(b_parts)), dtype=complex)
    for occ, amp in state.amplitudes.items():
        mat[a_index[_project(occ, side_a)], b_index[_project(occ, side_b)]] = amp
    norm = np.linalg.norm(mat)
    if norm == 0.0:
        raise DomainError("cannot compute entropy of a zero state")
    weights = np.linalg.svd(mat / norm, compute_uv=False) ** 2
    weights = weights[weights > _ENTROPY_WEIGHT_FLOOR]
    return float(-(weights * np.log2(weights)).sum())


def ppt_report(
    state: FockState,
    side_a_modes: Sequence[ModeId],
    dense_cap: int = DENSE_BASIS_CAP,
) -> EntanglementReport:
    """PPT spectrum and Schmidt entropy for a pure state across one bipartition."""
    rho = density_matrix(state, side_a_modes, dense_cap)
    eigenvalues = _hermitian_eigenvalues(partial_transpose(rho, dense_cap).matrix)
    return EntanglementReport(
        ppt_min_eigenvalue=float(eigenvalues.min()),
        negativity=negativity_from_eigenvalues(eigenvalues),
        entropy_bits=schmidt_entropy_bits(state, side_a_modes),
    )


def with_concurrence(report: EntanglementReport, concurrence: float) -> EntanglementReport:
    return replace(report, concurrence=concurrence)


def concurrence_two_qubit(c1: complex, c2: complex, p_floor: float = P_FLOOR) -> float:
    """Concurrence 2|c1||c2| / (|c1|^2 + |c2|^2) of c1|00> + c2|11>.

    Equals one exactly when the magnitudes match. Raises when both amplitudes
    are negligible, because then the encoding was never populated and the
    post-selection that produced it was impossible.
    """
    weight = abs(c1) ** 2 + abs(c2) ** 2
    if weight < p_floor:
        raise ZeroProbabilityError(
            "both logical amplitudes vanish; the post-selected branch has zero probability"
        )
    return 2.0 * abs(c1) * abs(c2) / weight
