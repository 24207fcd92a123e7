"""Squeezing parameters and transport between accelerated and inertial Fock spaces.

The mode mixing between a uniformly accelerated observer's Rindler ladder
operators and the inertial Psi / Psi' operators is

    V a_I  V^-1 = sqrt(1 - eps^2) (b  + eps b'+),
    V a_II V^-1 = sqrt(1 - eps^2) (b' + eps b+),

with eps = exp(-pi omega / a), plus the adjoint relations. Two independent
routes compute the inertial image of a collapsed number measurement:

* ``transport_measured_sector`` pushes the measured sector's creation string
  through the mode mixing factor by factor (the operator-algebra oracle);
* ``analytic_sector_state`` assembles the closed-form number-basis
  coefficients ``k_coefficient``.

Every downstream observable is cross-checked between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ConfigurationError, DomainError, PrecisionError
from .fock import (
    PRUNE_THRESHOLD,
    Branch,
    FockState,
    Frame,
    Ladder,
    ModeId,
    OperatorPolynomial,
    apply_polynomial,
    minkowski_mode,
    minkowski_pair,
    rindler_pair,
)

#: Largest admissible squeezing parameter; bigger values need truncations that
#: make the downstream dense eigensolves impractically large.
DEFAULT_EPSILON_MAX = 0.9

#: Default ceiling on the relative weight a transport may lose to truncation.
#: Both computation routes share the cap, so the oracle-vs-analytic fidelity
#: stays far tighter than this; the budget catches badly under-truncated runs.
#: (At strong squeezing the rung coefficients grow polynomially with the rung
#: index, so tails shrink slowly: m=4 at eps=0.7, N=34 still leaves ~1.5e-3.)
DEFAULT_LOSS_BUDGET = 1e-2


def epsilon_of(omega_over_a: float) -> float:
    """Squeezing parameter exp(-pi omega/a) for a dimensionless frequency."""
    if not omega_over_a > 0:
        raise DomainError(f"omega/a must be positive, got {omega_over_a!r}")
    return math.exp(-math.pi * omega_over_a)


def min_omega_for_cap(epsilon_max: float) -> float:
    """Smallest omega/a whose squeezing parameter stays within ``epsilon_max``."""
    return math.log(1.0 / epsilon_max) / math.pi


def required_truncation(
    m: int,
    epsilon: float,
    tolerance: float = DEFAULT_LOSS_BUDGET,
) -> int:
    """Per-mode cap needed to transport an m-photon measurement at ``tolerance``.

    The creation string raises occupations by m while the squeezed series
    decays like eps^2 per rung, so N = m + ceil(log tol / (2 log eps)).
    """
    if m < 0:
        raise DomainError("measured photon number must be non-negative")
    if epsilon <= 0.0:
        return max(m, 1)
    margin = math.ceil(math.log(tolerance) / (2.0 * math.log(epsilon)))
    return max(m + max(margin, 0), 1)


@dataclass(frozen=True)
class AccelerationParams:
    """Dimensionless frequency omega/a with its derived squeezing factors.

    ``epsilon`` is exp(-pi omega/a) and ``x`` its square, the Boltzmann-like
    weight of one extra Rindler pair.
    """

    omega_over_a: float
    epsilon: float
    x: float
    epsilon_max: float = DEFAULT_EPSILON_MAX

    @classmethod
    def from_omega(
        cls,
        omega_over_a: float,
        epsilon_max: float = DEFAULT_EPSILON_MAX,
    ) -> AccelerationParams:
        eps = epsilon_of(omega_over_a)
        if eps > epsilon_max:
            raise PrecisionError(
                f"epsilon={eps:.6g} exceeds the cap {epsilon_max}; "
                f"use omega/a >= {min_omega_for_cap(epsilon_max):.6g} "
                f"(a cap-level run would need N >= "
                f"{required_truncation(0, epsilon_max)})",
                required_truncation=required_truncation(0, eps if eps < 1 else epsilon_max),
                min_omega_over_a=min_omega_for_cap(epsilon_max),
            )
        return cls(omega_over_a, eps, eps * eps, epsilon_max)


def sector_tail_bound(params: AccelerationParams, truncation: int) -> float:
    """Unnormalized geometric tail eps^(2(N+1)) / (1 - eps^2) beyond the cap."""
    return params.x ** (truncation + 1) / (1.0 - params.x)


def unruh_sector_state(params: AccelerationParams, truncation: int) -> FockState:
    """One frequency sector of the inertial vacuum as the accelerated observer sees it.

    Returns sqrt(1-eps^2) * sum_n eps^n |n,n> over the (wedge I, wedge II)
    Rindler pair, cut at the cap; the discarded weight eps^(2(N+1)) is logged
    so that norm^2 + truncation_loss = 1 exactly.
    """
    if truncation < 1:
        raise ConfigurationError("truncation must be >= 1")
    scale = math.sqrt(1.0 - params.x)
    amps = {(n, n): scale * params.epsilon**n + 0j for n in range(truncation + 1)}
    return FockState(rindler_pair(params.omega_over_a), truncation, amps, params.x ** (truncation + 1))


def inertial_image_of_rindler_vacuum(params: AccelerationParams, truncation: int) -> FockState:
    """The accelerated observer's vacuum carried into the inertial frame.

    An alternating two-mode squeezed series sqrt(1-eps^2) * sum_n (-eps)^n |n,n>
    over the (Psi, Psi') pair.
    """
    if truncation < 1:
        raise ConfigurationError("truncation must be >= 1")
    scale = math.sqrt(1.0 - params.x)
    amps = {(n, n): scale * (-params.epsilon) ** n + 0j for n in range(truncation + 1)}
    return FockState(minkowski_pair(params.omega_over_a), truncation, amps, params.x ** (truncation + 1))


def _params_for(mode: ModeId, params) -> AccelerationParams:
    if isinstance(params, AccelerationParams):
        return params
    try:
        return params[mode.frequency]
    except KeyError:
        raise ConfigurationError(
            f"no acceleration parameters registered for frequency {mode.frequency}"
        ) from None


def _factor_image(
    mode: ModeId, kind: Ladder, params: AccelerationParams
) -> tuple[tuple[complex, tuple[tuple[ModeId, Ladder], ...]], ...]:
    """Two-term inertial image of a single Rindler ladder factor.

    The mixing constant is cosh of the squeezing angle, 1/sqrt(1 - eps^2),
    which is forced by commutator preservation: with it, transporting the
    full thermal series reproduces the inertial vacuum exactly. It drops out
    of every normalized observable.
    """
    if mode.frame is not Frame.RINDLER:
        raise ConfigurationError(
            "bogoliubov_image expects Rindler-frame operators, got a Minkowski mode"
        )
    c = 1.0 / math.sqrt(1.0 - params.x)
    eps = params.epsilon
    psi = minkowski_mode(Branch.I, mode.frequency)
    psi_prime = minkowski_mode(Branch.II, mode.frequency)
    same, partner = (psi, psi_prime) if mode.branch is Branch.I else (psi_prime, psi)
    if kind is Ladder.ANNIHILATE:
        return (
            (c + 0j, ((same, Ladder.ANNIHILATE),)),
            (c * eps + 0j, ((partner, Ladder.CREATE),)),
        )
    return (
        (c + 0j, ((same, Ladder.CREATE),)),
        (c * eps + 0j, ((partner, Ladder.ANNIHILATE),)),
    )


def bogoliubov_image(op: OperatorPolynomial, params) -> OperatorPolynomial:
    """Substitute the inertial image for every Rindler factor and distribute fully.

    ``params`` is one AccelerationParams applied to every frequency, or a dict
    keyed by frequency. Factor order is preserved; products of the two-term
    images are expanded into ordered monomials without combining like terms.
    """
    out_terms: list[tuple[complex, tuple[tuple[ModeId, Ladder], ...]]] = []
    for coeff, factors in op.terms:
        expansions = [_factor_image(mode, kind, _params_for(mode, params)) for mode, kind in factors]
        partial: list[tuple[complex, tuple[tuple[ModeId, Ladder], ...]]] = [(coeff, ())]
        for choices in expansions:
            partial = [
                (c0 * c1, f0 + f1)
                for c0, f0 in partial
                for c1, f1 in choices
            ]
        out_terms.extend(partial)
    return OperatorPolynomial(tuple(out_terms))


def _apply_transported_factors(
    state: FockState,
    factors: list[tuple[ModeId, Ladder]],
    params,
    prune_threshold: float = PRUNE_THRESHOLD,
) -> FockState:
    """Apply V (factor string) V^-1 to an inertial-frame state.

    Each Rindler factor is replaced by its two-term image and applied in
    turn (rightmost factor first), which avoids materializing the 2^k-term
    distributed product for long strings.
    """
    for mode, kind in reversed(factors):
        image = OperatorPolynomial(_factor_image(mode, kind, _params_for(mode, params)))
        state = apply_polynomial(state, image, prune_threshold)
    return state


def transport_measured_sector(
    params: AccelerationParams,
    m: int,
    truncation: int,
    loss_budget: float = DEFAULT_LOSS_BUDGET,
    prune_threshold: float = PRUNE_THRESHOLD,
) -> FockState:
    """Inertial image of one sector collapsed onto m Rindler pairs (operator oracle).

    The collapsed sector is the creation string (a_I+)^m (a_II+)^m / m! on the
    accelerated vacuum; each factor is pushed through the mode mixing and
    applied to the transported vacuum, then the result is normalized. The
    returned state's truncation_loss holds the relative weight lost to the cap.
    """
    if m < 0:
        raise DomainError("measured photon number must be non-negative")
    needed = required_truncation(m, params.epsilon, loss_budget)
    if truncation < needed:
        raise PrecisionError(
            f"truncation {truncation} too small for m={m}, eps={params.epsilon:.4g} "
            f"at loss budget {loss_budget:g}; need N >= {needed}",
            required_truncation=needed,
        )
    # A rung k draws on base rungs up to k + m, so the string is applied with
    # 2m rungs of headroom: rungs up to N + m then carry their exact series
    # values while the top m rungs of the padded window are truncation
    # artifacts (uncancelled, polynomially inflated) and are discarded.
    base = inertial_image_of_rindler_vacuum(params, truncation + 2 * m)
    wedge_i, wedge_ii = rindler_pair(params.omega_over_a)
    factors = [(wedge_i, Ladder.CREATE), (wedge_ii, Ladder.CREATE)] * m
    raw = _apply_transported_factors(base, factors, params, prune_threshold)
    kept: dict[tuple[int, ...], complex] = {}
    tail_weights = {rung: 0.0 for rung in range(truncation + 1, truncation + m + 1)}
    for occ, amp in raw.amplitudes.items():
        rung = max(occ)
        if rung <= truncation:
            kept[occ] = amp
        elif rung <= truncation + m:
            tail_weights[rung] += abs(amp) ** 2
    loss = _estimate_tail(tail_weights, params.x) if m > 0 else raw.truncation_loss
    state = FockState(base.modes, truncation, kept, loss)
    rel_loss = state.relative_truncation_loss()
    if rel_loss > loss_budget:
        raise PrecisionError(
            f"transport lost relative weight {rel_loss:.3g} > budget {loss_budget:g}; "
            f"increase truncation beyond {truncation}",
            required_truncation=required_truncation(m, params.epsilon, loss_budget * 1e-2),
        )
    return replace(state.normalize(), truncation_loss=rel_loss)


def _estimate_tail(tail_weights: dict[int, float], x: float) -> float:
    """Exact clipped rung weights plus a geometric extrapolation beyond them."""
    if not tail_weights:
        return 0.0
    rungs = sorted(tail_weights)
    total = sum(tail_weights.values())
    w_last = tail_weights[rungs[-1]]
    ratio = x
    if len(rungs) >= 2 and tail_weights[rungs[-2]] > 0.0:
        ratio = min(max(w_last / tail_weights[rungs[-2]], x), 0.97)
    return total + w_last * ratio / (1.0 - ratio)


def transport_thermal_sector(
    params: AccelerationParams,
    truncation: int,
    prune_threshold: float = PRUNE_THRESHOLD,
) -> FockState:
    """Transport the full, unmeasured thermal sector series back to the inertial frame.

    Sums eps^n / n! times the transported creation string (a_I+ a_II+)^n applied
    to the transported accelerated vacuum. Up to truncation this reproduces the
    inertial vacuum, which is the round-trip consistency check on the whole
    transport machinery.

    The individual terms hold mutually cancelling components that grow far
    beyond the final result (1e35 and more at strong squeezing), so the sum is
    evaluated in extended precision and only the settled total is brought back
    to floats. The precision is raised and the sum repeated if the observed
    term magnitudes ever approach the working precision.
    """
    if truncation < 1:
        raise ConfigurationError("truncation must be >= 1")
    digits = 40
    while True:
        amplitudes, largest = _thermal_series_mp(params.epsilon, truncation, digits)
        if largest <= 0.0 or math.log10(largest) + 18 <= digits:
            break
        digits = int(math.log10(largest)) + 30
    kept = {
        occ: amp + 0j
        for occ, amp in amplitudes.items()
        if max(occ) <= truncation and abs(amp) >= prune_threshold
    }
    # Rungs above truncation + 2 lack cancellation partners inside the padded
    # window, so only the two exact rungs feed the loss estimate.
    tail_weights = {rung: 0.0 for rung in (truncation + 1, truncation + 2)}
    for occ, amp in amplitudes.items():
        if max(occ) in tail_weights:
            tail_weights[max(occ)] += amp**2
    state = FockState(
        minkowski_pair(params.omega_over_a),
        truncation,
        kept,
        _estimate_tail(tail_weights, params.x),
    )
    rel_loss = state.relative_truncation_loss()
    return replace(state.normalize(), truncation_loss=rel_loss)


def _thermal_series_mp(
    epsilon: float, truncation: int, digits: int
) -> tuple[dict[tuple[int, int], float], float]:
    """Extended-precision sum of the transported thermal series.

    Returns the summed amplitudes (as floats, on a window of twice the cap)
    and the largest intermediate term magnitude seen, which callers use to
    confirm the working precision was sufficient.
    """
    from mpmath import mp, mpf
    from mpmath import sqrt as mp_sqrt

    pad = 2 * truncation + 2
    with mp.workdps(digits):
        eps = mpf(epsilon)
        x = eps * eps
        cosh = 1 / mp_sqrt(1 - x)
        root = [mp_sqrt(k) for k in range(pad + 2)]
        scale = mp_sqrt(1 - x)
        base = {(n, n): scale * (-eps) ** n for n in range(pad + 1)}

        def image_ii_dag(st):
            # cosh (b'+ + eps b) on a sparse (psi, psi') table
            out: dict[tuple[int, int], object] = {}
            for (i, j), v in st.items():
                if j + 1 <= pad:
                    key = (i, j + 1)
                    out[key] = out.get(key, 0) + cosh * root[j + 1] * v
                if i > 0:
                    key = (i - 1, j)
                    out[key] = out.get(key, 0) + cosh * eps * root[i] * v
            return out

        def image_i_dag(st):
            # cosh (b+ + eps b')
            out: dict[tuple[int, int], object] = {}
            for (i, j), v in st.items():
                if i + 1 <= pad:
                    key = (i + 1, j)
                    out[key] = out.get(key, 0) + cosh * root[i + 1] * v
                if j > 0:
                    key = (i, j - 1)
                    out[key] = out.get(key, 0) + cosh * eps * root[j] * v
            return out

        acc = dict(base)
        term = base
        coeff = mpf(1)
        largest = mpf(0)
        for n in range(1, truncation + 1):
            term = image_i_dag(image_ii_dag(term))
            coeff *= eps / n
            for key, value in term.items():
                contribution = coeff * value
                acc[key] = acc.get(key, 0) + contribution
                if abs(contribution) > largest:
                    largest = abs(contribution)
        return {key: float(value) for key, value in acc.items()}, float(largest)


def k_coefficient(m: int, q: int, l: int, epsilon: float) -> float:
    """Closed-form number-basis coefficient for a transported m-photon sector.

    For m = 0 it is eps^l when q = 0 and zero otherwise. For m >= 1 it is
    binom(m, q) * prod_{i=1..m}(l + i) * eps^(m - q + l). Signs (-1)^l are
    applied in the state assembly, not here. Large integer prefactors fall
    back to log-domain evaluation.
    """
    if m < 0 or l < 0:
        raise DomainError("m and l must be non-negative")
    if q < 0 or q > m:
        raise DomainError(f"q must satisfy 0 <= q <= m, got q={q}, m={m}")
    if not 0.0 <= epsilon < 1.0:
        # epsilon == 0 is the underflowed no-squeezing limit and is admitted
        raise DomainError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    if m == 0:
        return epsilon**l if q == 0 else 0.0
    prefactor = math.comb(m, q) * math.prod(range(l + 1, l + m + 1))
    exponent = m - q + l
    if prefactor.bit_length() < 900:
        return prefactor * epsilon**exponent
    log_value = (
        math.lgamma(m + 1)
        - math.lgamma(q + 1)
        - math.lgamma(m - q + 1)
        + math.lgamma(l + m + 1)
        - math.lgamma(l + 1)
        + exponent * math.log(epsilon)
    )
    return math.exp(log_value)


def converged_truncation(
    m: int,
    epsilon: float,
    tolerance: float = 1e-9,
) -> int:
    """Per-mode cap at which the closed-form series tail drops below ``tolerance``.

    Unlike ``required_truncation`` this accounts for the polynomial growth of
    the rung coefficients (degree m in the rung index), which dominates the
    tail for larger m at strong squeezing.
    """
    if m < 0:
        raise DomainError("measured photon number must be non-negative")
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    k_max = required_truncation(m, epsilon, tolerance) + 40 * (m + 1) + 50
    weights = []
    for k in range(k_max + 1):
        c = 0.0
        for q in range(0, min(m, k) + 1):
            c += (-1.0) ** (k - q) * k_coefficient(m, q, k - q, epsilon)
        weights.append(c * c)
    total = sum(weights)
    tail = 0.0
    for n in range(k_max, 0, -1):
        tail += weights[n]
        if tail / total > tolerance:
            return max(n + 1, 1)
    return 1


def analytic_sector_state(
    params: AccelerationParams,
    m: int,
    truncation: int,
    loss_budget: float = DEFAULT_LOSS_BUDGET,
    prune_threshold: float = PRUNE_THRESHOLD,
) -> FockState:
    """Closed-form transported sector state over the (Psi, Psi') pair.

    Assembles sum over l and q of (-1)^l K^m_{q,l} |q+l; q+l>, grouping the
    (q, l) combinations that land on the same rung before normalizing.
    """
    if m < 0:
        raise DomainError("measured photon number must be non-negative")
    needed = required_truncation(m, params.epsilon, loss_budget)
    if truncation < needed:
        raise PrecisionError(
            f"truncation {truncation} too small for m={m}, eps={params.epsilon:.4g} "
            f"at loss budget {loss_budget:g}; need N >= {needed}",
            required_truncation=needed,
        )
    amps: dict[tuple[int, ...], complex] = {}
    for k in range(truncation + 1):
        total = 0.0
        for q in range(0, min(m, k) + 1):
            total += (-1.0) ** (k - q) * k_coefficient(m, q, k - q, params.epsilon)
        amps[(k, k)] = total + 0j
    state = FockState(minkowski_pair(params.omega_over_a), truncation, amps, 0.0).prune(prune_threshold)
    return state.normalize()
