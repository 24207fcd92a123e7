"""Sparse truncated multi-mode bosonic Fock states and ladder-operator algebra.

A state is a sparse map from occupation vectors to complex amplitudes over an
ordered mode registry, with a hard per-mode occupation cap N. Any weight an
operator would push past the cap is dropped and recorded in
``truncation_loss``, so truncation claims stay auditable instead of silently
wrapping. States are immutable values; every operation returns a new state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .errors import ConfigurationError, DomainError

#: Default magnitude below which amplitudes may be pruned away.
PRUNE_THRESHOLD = 1e-15

#: Squared-norm floor under which a state cannot be normalized.
_NORM_FLOOR = 1e-300


class Frame(Enum):
    """Which observer's mode decomposition a mode belongs to."""

    RINDLER = "rindler"
    MINKOWSKI = "minkowski"


class Branch(Enum):
    """Wedge I vs wedge II for Rindler modes; Psi vs Psi' for Minkowski ones."""

    I = "I"
    II = "II"


@dataclass(frozen=True)
class ModeId:
    """Label for a single field mode: frame, branch, and frequency in omega/a units."""

    frame: Frame
    branch: Branch
    frequency: float

    def __post_init__(self):
        if not self.frequency > 0:
            raise DomainError(f"mode frequency must be positive, got {self.frequency!r}")

    def sort_key(self):
        return (self.frame.value, self.branch.value, self.frequency)


def rindler_mode(branch: Branch, omega_over_a: float) -> ModeId:
    return ModeId(Frame.RINDLER, branch, omega_over_a)


def minkowski_mode(branch: Branch, omega_over_a: float) -> ModeId:
    return ModeId(Frame.MINKOWSKI, branch, omega_over_a)


def rindler_pair(omega_over_a: float) -> tuple[ModeId, ModeId]:
    """The (wedge I, wedge II) Rindler mode pair at one frequency."""
    return rindler_mode(Branch.I, omega_over_a), rindler_mode(Branch.II, omega_over_a)


def minkowski_pair(omega_over_a: float) -> tuple[ModeId, ModeId]:
    """The (Psi, Psi') inertial mode pair at one frequency."""
    return minkowski_mode(Branch.I, omega_over_a), minkowski_mode(Branch.II, omega_over_a)


class Ladder(Enum):
    CREATE = "create"
    ANNIHILATE = "annihilate"


@dataclass(frozen=True)
class FockState:
    """Sparse pure state over an ordered mode list with per-mode cap ``truncation``.

    ``amplitudes`` maps occupation tuples (one entry per mode, each in
    0..truncation) to complex amplitudes. ``truncation_loss`` accumulates the
    squared magnitude discarded by cap hits and pruning; it is bookkeeping,
    not part of the physical state. The amplitude dict must not be mutated
    after construction.
    """

    modes: tuple[ModeId, ...]
    truncation: int
    amplitudes: dict[tuple[int, ...], complex]
    truncation_loss: float = 0.0

    def __post_init__(self):
        if not self.modes:
            raise ConfigurationError("a state needs at least one mode")
        if len(set(self.modes)) != len(self.modes):
            raise ConfigurationError("duplicate ModeId in mode registry")
        if self.truncation < 1:
            raise ConfigurationError(f"truncation must be >= 1, got {self.truncation}")
        width = len(self.modes)
        for occ in self.amplitudes:
            if len(occ) != width:
                raise ConfigurationError(
                    f"occupation vector {occ} does not match {width} registered modes"
                )
            if any(n < 0 or n > self.truncation for n in occ):
                raise ConfigurationError(
                    f"occupation vector {occ} outside 0..{self.truncation}"
                )

    def mode_index(self, mode: ModeId) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise ConfigurationError(f"mode {mode} is not registered in this state") from None

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(occupation), 0j)

    def items(self) -> Iterator[tuple[tuple[int, ...], complex]]:
        return iter(self.amplitudes.items())

    def norm_squared(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def normalize(self) -> FockState:
        """Rescale to unit norm. The truncation_loss bookkeeping is kept as is."""
        n2 = self.norm_squared()
        if n2 < _NORM_FLOOR:
            raise DomainError("cannot normalize a state with vanishing norm")
        inv = 1.0 / math.sqrt(n2)
        return replace(self, amplitudes={k: v * inv for k, v in self.amplitudes.items()})

    def prune(self, threshold: float = PRUNE_THRESHOLD) -> FockState:
        """Drop amplitudes with magnitude below ``threshold``, logging their weight."""
        kept: dict[tuple[int, ...], complex] = {}
        dropped = 0.0
        for occ, amp in self.amplitudes.items():
            if abs(amp) < threshold:
                dropped += abs(amp) ** 2
            else:
                kept[occ] = amp
        return replace(self, amplitudes=kept, truncation_loss=self.truncation_loss + dropped)

    def relative_truncation_loss(self) -> float:
        """Discarded weight as a fraction of the weight the state started with."""
        total = self.norm_squared() + self.truncation_loss
        if total <= 0.0:
            return 0.0
        return self.truncation_loss / total


@dataclass(frozen=True)
class OperatorPolynomial:
    """Sum of monomials in ladder operators with complex coefficients.

    Each term is ``(coefficient, factors)`` where factors are (mode, kind)
    pairs in left-to-right writing order; the leftmost factor acts last when
    the term is applied to a state.
    """

    terms: tuple[tuple[complex, tuple[tuple[ModeId, Ladder], ...]], ...]

    @classmethod
    def identity(cls, coefficient: complex = 1.0) -> OperatorPolynomial:
        return cls(((complex(coefficient), ()),))

    @classmethod
    def ladder(cls, mode: ModeId, kind: Ladder, coefficient: complex = 1.0) -> OperatorPolynomial:
        return cls(((complex(coefficient), ((mode, kind),)),))

    def __add__(self, other: OperatorPolynomial) -> OperatorPolynomial:
        return OperatorPolynomial(self.terms + other.terms)

    def __mul__(self, other):
        if isinstance(other, OperatorPolynomial):
            # operator product: self acts after other
            return OperatorPolynomial(
                tuple(
                    (ca * cb, fa + fb)
                    for ca, fa in self.terms
                    for cb, fb in other.terms
                )
            )
        return self.scaled(other)

    def __rmul__(self, scalar) -> OperatorPolynomial:
        return self.scaled(scalar)

    def __neg__(self) -> OperatorPolynomial:
        return self.scaled(-1.0)

    def __pow__(self, exponent: int) -> OperatorPolynomial:
        if exponent < 0:
            raise DomainError("operator polynomials support non-negative powers only")
        result = OperatorPolynomial.identity()
        for _ in range(exponent):
            result = result * self
        return result

    def scaled(self, scalar) -> OperatorPolynomial:
        c = complex(scalar)
        return OperatorPolynomial(tuple((c * coeff, factors) for coeff, factors in self.terms))


def create_vacuum(modes: Sequence[ModeId], truncation: int) -> FockState:
    """All-zeros occupation state with amplitude 1 and no accumulated loss."""
    modes = tuple(modes)
    if not modes:
        raise ConfigurationError("vacuum needs a non-empty mode list")
    zeros = (0,) * len(modes)
    return FockState(modes, truncation, {zeros: 1.0 + 0j}, 0.0)


def apply_ladder(state: FockState, mode: ModeId, kind: Ladder) -> FockState:
    """Apply a single creation or annihilation operator on ``mode``.

    Creation maps amplitude at n to sqrt(n+1) times amplitude at n+1;
    amplitudes that would exceed the cap are dropped with their squared
    magnitude added to truncation_loss. Annihilation on n=0 yields nothing
    (exactly, with no loss recorded).
    """
    i = state.mode_index(mode)
    out: dict[tuple[int, ...], complex] = {}
    dropped = 0.0
    if kind is Ladder.CREATE:
        cap = state.truncation
        for occ, amp in state.amplitudes.items():
            n = occ[i]
            if n + 1 > cap:
                dropped += abs(amp) ** 2
                continue
            key = occ[:i] + (n + 1,) + occ[i + 1 :]
            out[key] = out.get(key, 0j) + math.sqrt(n + 1) * amp
    else:
        for occ, amp in state.amplitudes.items():
            n = occ[i]
            if n == 0:
                continue
            key = occ[:i] + (n - 1,) + occ[i + 1 :]
            out[key] = out.get(key, 0j) + math.sqrt(n) * amp
    return FockState(state.modes, state.truncation, out, state.truncation_loss + dropped)


def apply_polynomial(
    state: FockState,
    op: OperatorPolynomial,
    prune_threshold: float = PRUNE_THRESHOLD,
) -> FockState:
    """Apply a sum of ladder monomials by linear extension of ``apply_ladder``.

    Within each term the rightmost factor acts first. Contributions are
    accumulated amplitude-wise; dust below ``prune_threshold`` left behind by
    cancellations is pruned into truncation_loss.
    """
    acc: dict[tuple[int, ...], complex] = {}
    extra_loss = 0.0
    base = replace(state, truncation_loss=0.0)
    for coeff, factors in op.terms:
        s = base
        for mode, kind in reversed(factors):
            s = apply_ladder(s, mode, kind)
        extra_loss += abs(coeff) ** 2 * s.truncation_loss
        for occ, amp in s.amplitudes.items():
            acc[occ] = acc.get(occ, 0j) + coeff * amp
    result = FockState(state.modes, state.truncation, acc, state.truncation_loss + extra_loss)
    if prune_threshold > 0.0:
        result = result.prune(prune_threshold)
    return result


def _require_same_registry(x: FockState, y: FockState) -> None:
    if x.modes != y.modes or x.truncation != y.truncation:
        raise ConfigurationError("states live on different mode registries or truncations")


def inner_product(x: FockState, y: FockState) -> complex:
    """<x|y>, conjugate-linear in the first argument."""
    _require_same_registry(x, y)
    if len(x.amplitudes) > len(y.amplitudes):
        return sum(
            (x.amplitudes[occ].conjugate() * amp for occ, amp in y.amplitudes.items()
             if occ in x.amplitudes),
            0j,
        )
    return sum(
        (amp.conjugate() * y.amplitudes[occ] for occ, amp in x.amplitudes.items()
         if occ in y.amplitudes),
        0j,
    )


def fidelity(x: FockState, y: FockState) -> float:
    """|<x|y>|^2 after normalizing both states."""
    return abs(inner_product(x.normalize(), y.normalize())) ** 2


def tensor(x: FockState, y: FockState) -> FockState:
    """Tensor product on the concatenated registry; amplitudes multiply."""
    if set(x.modes) & set(y.modes):
        raise ConfigurationError("tensor factors must have disjoint mode registries")
    if x.truncation != y.truncation:
        raise ConfigurationError("tensor factors must share a truncation cap")
    out: dict[tuple[int, ...], complex] = {}
    for occ_x, amp_x in x.amplitudes.items():
        for occ_y, amp_y in y.amplitudes.items():
            out[occ_x + occ_y] = amp_x * amp_y
    return FockState(
        x.modes + y.modes,
        x.truncation,
        out,
        x.truncation_loss + y.truncation_loss,
    )


def number_expectation(state: FockState, mode: ModeId) -> float:
    """Sum of n_mode * |amplitude|^2 over the basis (caller supplies a normalized state)."""
    i = state.mode_index(mode)
    return sum(occ[i] * abs(amp) ** 2 for occ, amp in state.amplitudes.items())


def reorder_modes(state: FockState, new_order: Sequence[ModeId]) -> FockState:
    """Permute the mode registry (and every occupation key) into ``new_order``."""
    new_order = tuple(new_order)
    if sorted(new_order, key=ModeId.sort_key) != sorted(state.modes, key=ModeId.sort_key):
        raise ConfigurationError("new mode order must be a permutation of the registry")
    perm = [state.mode_index(m) for m in new_order]
    out = {tuple(occ[p] for p in perm): amp for occ, amp in state.amplitudes.items()}
    return FockState(new_order, state.truncation, out, state.truncation_loss)
