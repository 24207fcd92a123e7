"""Projective number measurements: outcome statistics, collapse, renormalization.

Covers the accelerated observer's single-mode number measurements on the
thermal sector as well as the inertial observer's total-photon-number
post-selection, plus a seeded Born-rule sampler for Monte Carlo sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bogoliubov import AccelerationParams
from .errors import DomainError, ZeroProbabilityError
from .fock import FockState, ModeId

#: Probabilities below this floor are treated as impossible outcomes.
P_FLOOR = 1e-30

#: Name of the deterministic generator behind ``sample_outcome``.
RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome, Born probability, and collapsed (renormalized) state.

    ``total`` distinguishes a total-number measurement over ``modes`` from a
    single-mode number measurement (in which case ``modes`` has one entry).
    """

    modes: tuple[ModeId, ...]
    outcome: int
    total: bool
    probability: float
    collapsed: FockState


def thermal_outcome_distribution(
    params: AccelerationParams, m_max: int | None = None
) -> np.ndarray:
    """Born probabilities P(m) = (1 - eps^2) eps^(2m) for a sector number measurement.

    The infinite geometric sequence sums to one exactly; the returned array is
    cut at ``m_max`` (by default where the remaining tail drops below 1e-18).
    """
    if m_max is None:
        if params.x > 0.0:
            m_max = min(1000, math.ceil(math.log(1e-18) / math.log(params.x)))
        else:
            m_max = 0
    if m_max < 0:
        raise DomainError("m_max must be non-negative")
    weights = (1.0 - params.x) * params.x ** np.arange(m_max + 1)
    return weights


def project_number(
    state: FockState, mode: ModeId, m: int, p_floor: float = P_FLOOR
) -> MeasurementRecord:
    """Collapse onto the occupation-m eigenspace of a single mode.

    Probability is the squared norm of the kept component of the input state;
    the collapsed state is renormalized. Outcomes with probability below
    ``p_floor`` raise, so dead post-selection branches fail loudly instead of
    propagating NaNs.
    """
    i = state.mode_index(mode)
    if m < 0 or m > state.truncation:
        raise DomainError(f"outcome {m} outside 0..{state.truncation}")
    kept = {occ: amp for occ, amp in state.amplitudes.items() if occ[i] == m}
    probability = sum(abs(a) ** 2 for a in kept.values())
    if probability < p_floor:
        if not kept:
            raise ZeroProbabilityError(
                f"outcome {m} on mode {mode} has no support in the state"
            )
        raise ZeroProbabilityError(
            f"outcome {m} on mode {mode} has probability {probability:.3g} "
            f"below the floor {p_floor:g}"
        )
    collapsed = FockState(state.modes, state.truncation, kept, state.truncation_loss).normalize()
    return MeasurementRecord((mode,), m, False, probability, collapsed)


def project_total_number(
    state: FockState,
    modes: Sequence[ModeId],
    n_total: int,
    p_floor: float = P_FLOOR,
) -> MeasurementRecord:
    """Collapse onto the subspace whose occupation sum over ``modes`` is ``n_total``."""
    indices = [state.mode_index(m) for m in modes]
    if n_total < 0:
        raise DomainError("total photon number must be non-negative")
    kept = {
        occ: amp
        for occ, amp in state.amplitudes.items()
        if sum(occ[i] for i in indices) == n_total
    }
    probability = sum(abs(a) ** 2 for a in kept.values())
    if probability < p_floor:
        if not kept:
            raise ZeroProbabilityError(
                f"total occupation {n_total} has no support in the state"
            )
        raise ZeroProbabilityError(
            f"total occupation {n_total} has probability {probability:.3g} "
            f"below the floor {p_floor:g}"
        )
    collapsed = FockState(state.modes, state.truncation, kept, state.truncation_loss).normalize()
    return MeasurementRecord(tuple(modes), n_total, True, probability, collapsed)


def sample_outcome(
    state: FockState, mode: ModeId, seed: int
) -> tuple[int, MeasurementRecord]:
    """Draw one Born-rule outcome with a seeded PCG64 stream and collapse on it.

    Identical seeds give identical outcomes; the generator name is exported as
    ``RNG_ALGORITHM`` so runs can record how they were drawn.
    """
    i = state.mode_index(mode)
    dist: dict[int, float] = {}
    for occ, amp in state.amplitudes.items():
        dist[occ[i]] = dist.get(occ[i], 0.0) + abs(amp) ** 2
    outcomes = sorted(dist)
    total = sum(dist.values())
    u = np.random.default_rng(seed).random() * total
    running = 0.0
    chosen = outcomes[-1]
    for m in outcomes:
        running += dist[m]
        if u < running:
            chosen = m
            break
    return chosen, project_number(state, mode, chosen)
