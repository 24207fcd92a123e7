"""Dense-matrix reference implementations used to cross-check the sparse library.

Everything here is deliberately written against plain numpy arrays over the
full (cap+1)^modes product basis, independent of the sparse code paths it
checks.
"""

import math

import numpy as np

from unruhsim import FockState


def dense_dim(num_modes: int, cap: int) -> int:
    return (cap + 1) ** num_modes


def dense_index(occ, cap: int) -> int:
    idx = 0
    for n in occ:
        idx = idx * (cap + 1) + n
    return idx


def to_dense(state: FockState) -> np.ndarray:
    vec = np.zeros(dense_dim(len(state.modes), state.truncation), dtype=complex)
    for occ, amp in state.amplitudes.items():
        vec[dense_index(occ, state.truncation)] = amp
    return vec


def dense_ladder(num_modes: int, cap: int, mode_pos: int, create: bool) -> np.ndarray:
    """Full matrix of a single-mode ladder operator on the product basis."""
    d = cap + 1
    single = np.zeros((d, d))
    for n in range(cap):
        single[n + 1, n] = math.sqrt(n + 1)
    if not create:
        single = single.T
    op = np.array([[1.0]])
    for pos in range(num_modes):
        op = np.kron(op, single if pos == mode_pos else np.eye(d))
    return op


def dense_partial_transpose(matrix: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Reshape-based partial transpose over the first tensor factor."""
    return (
        matrix.reshape(dim_a, dim_b, dim_a, dim_b)
        .transpose(2, 1, 0, 3)
        .reshape(dim_a * dim_b, dim_a * dim_b)
    )


def random_sparse_state(rng, modes, cap, n_entries):
    """Random complex amplitudes on distinct occupation vectors."""
    amps = {}
    while len(amps) < n_entries:
        occ = tuple(int(rng.integers(0, cap + 1)) for _ in modes)
        amps[occ] = complex(rng.normal(), rng.normal())
    return FockState(tuple(modes), cap, amps)
