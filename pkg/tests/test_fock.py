import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unruhsim import (
    Branch,
    ConfigurationError,
    DomainError,
    FockState,
    Ladder,
    ModeId,
    OperatorPolynomial,
    apply_ladder,
    apply_polynomial,
    create_vacuum,
    inner_product,
    minkowski_mode,
    minkowski_pair,
    number_expectation,
    reorder_modes,
    rindler_mode,
    tensor,
)

from helpers import dense_ladder, random_sparse_state, to_dense

PAIR = minkowski_pair(0.25)


def test_vacuum_construction():
    vac = create_vacuum(PAIR, 10)
    assert vac.amplitudes == {(0, 0): 1.0 + 0j}
    assert vac.norm() == 1.0
    assert vac.truncation_loss == 0.0
    for mode in PAIR:
        assert number_expectation(vac, mode) == 0.0


def test_vacuum_rejects_duplicate_modes():
    mode = minkowski_mode(Branch.I, 0.25)
    with pytest.raises(ConfigurationError):
        create_vacuum((mode, mode), 5)
    with pytest.raises(ConfigurationError):
        create_vacuum((), 5)


def test_mode_frequency_must_be_positive():
    with pytest.raises(DomainError):
        ModeId(PAIR[0].frame, Branch.I, 0.0)
    with pytest.raises(DomainError):
        rindler_mode(Branch.II, -1.0)


def test_occupation_vectors_validated():
    with pytest.raises(ConfigurationError):
        FockState(PAIR, 3, {(0, 4): 1.0 + 0j})
    with pytest.raises(ConfigurationError):
        FockState(PAIR, 3, {(0,): 1.0 + 0j})


def test_creation_matrix_element():
    mode = minkowski_mode(Branch.I, 1.0)
    state = FockState((mode,), 10, {(2,): 1.0 + 0j})
    out = apply_ladder(state, mode, Ladder.CREATE)
    assert out.amplitudes == {(3,): pytest.approx(math.sqrt(3))}


def test_annihilate_vacuum_gives_zero_state():
    mode = minkowski_mode(Branch.I, 1.0)
    out = apply_ladder(create_vacuum((mode,), 5), mode, Ladder.ANNIHILATE)
    assert out.amplitudes == {}
    assert out.norm() == 0.0
    assert out.truncation_loss == 0.0


def test_creation_at_cap_records_loss():
    mode = minkowski_mode(Branch.I, 1.0)
    state = FockState((mode,), 4, {(4,): 0.5 + 0j})
    out = apply_ladder(state, mode, Ladder.CREATE)
    assert out.amplitudes == {}
    assert out.truncation_loss == pytest.approx(0.25)


def test_unregistered_mode_rejected():
    with pytest.raises(ConfigurationError):
        apply_ladder(create_vacuum(PAIR, 5), minkowski_mode(Branch.I, 9.0), Ladder.CREATE)


@pytest.mark.parametrize("kind,create", [(Ladder.CREATE, True), (Ladder.ANNIHILATE, False)])
def test_ladder_matches_dense_reference(kind, create):
    rng = np.random.default_rng(7)
    for _ in range(4):
        state = random_sparse_state(rng, PAIR, 5, 9)
        for pos, mode in enumerate(PAIR):
            sparse = to_dense(apply_ladder(state, mode, kind))
            dense = dense_ladder(2, 5, pos, create) @ to_dense(state)
            np.testing.assert_allclose(sparse, dense, atol=1e-12)


def test_commutator_reproduces_identity_below_cap():
    mode = minkowski_mode(Branch.I, 1.0)
    lower = OperatorPolynomial.ladder(mode, Ladder.ANNIHILATE)
    raise_ = OperatorPolynomial.ladder(mode, Ladder.CREATE)
    commutator = lower * raise_ + raise_.scaled(-1.0) * lower
    for n in range(10):
        state = FockState((mode,), 10, {(n,): 1.0 + 0j})
        out = apply_polynomial(state, commutator)
        assert out.amplitude((n,)) == pytest.approx(1.0)
        assert all(occ == (n,) for occ in out.amplitudes)


def test_identity_polynomial_is_identity():
    state = FockState(PAIR, 6, {(1, 2): 0.3 + 0.4j, (0, 0): 0.5 + 0j})
    out = apply_polynomial(state, OperatorPolynomial.identity())
    assert out.amplitudes == state.amplitudes


def test_number_operator():
    mode = minkowski_mode(Branch.II, 2.0)
    number = OperatorPolynomial.ladder(mode, Ladder.CREATE) * OperatorPolynomial.ladder(
        mode, Ladder.ANNIHILATE
    )
    for n in (0, 1, 4):
        state = FockState((mode,), 6, {(n,): 1.0 + 0j})
        out = apply_polynomial(state, number)
        assert out.amplitude((n,)) == pytest.approx(n)


def test_cross_term_expansion_on_vacuum():
    # (b+ + 0.5 b')(b'+ + 0.5 b) |0,0> = |1,1> + 0.5 |0,0>, found by expanding
    # the four monomials by hand
    psi, psi_prime = PAIR
    left = OperatorPolynomial.ladder(psi, Ladder.CREATE) + OperatorPolynomial.ladder(
        psi_prime, Ladder.ANNIHILATE, 0.5
    )
    right = OperatorPolynomial.ladder(psi_prime, Ladder.CREATE) + OperatorPolynomial.ladder(
        psi, Ladder.ANNIHILATE, 0.5
    )
    out = apply_polynomial(create_vacuum(PAIR, 6), left * right)
    assert out.amplitude((1, 1)) == pytest.approx(1.0)
    assert out.amplitude((0, 0)) == pytest.approx(0.5)
    assert len(out.amplitudes) == 2


def test_polynomial_power():
    mode = minkowski_mode(Branch.I, 1.0)
    squared = OperatorPolynomial.ladder(mode, Ladder.CREATE) ** 2
    out = apply_polynomial(create_vacuum((mode,), 5), squared)
    assert out.amplitude((2,)) == pytest.approx(math.sqrt(2))


def test_inner_product_examples():
    vac = create_vacuum(PAIR, 5)
    assert inner_product(vac, vac) == pytest.approx(1.0)
    x = FockState(PAIR, 5, {(1, 0): 1.0 + 0j})
    y = FockState(PAIR, 5, {(0, 1): 1.0 + 0j})
    assert inner_product(x, y) == 0j


def test_inner_product_registry_mismatch():
    with pytest.raises(ConfigurationError):
        inner_product(create_vacuum(PAIR, 5), create_vacuum(PAIR, 6))
    with pytest.raises(ConfigurationError):
        inner_product(create_vacuum(PAIR, 5), create_vacuum(minkowski_pair(0.5), 5))


complex_amp = st.complex_numbers(
    min_magnitude=1e-3, max_magnitude=10, allow_nan=False, allow_infinity=False
)
occupations = st.tuples(st.integers(0, 4), st.integers(0, 4))
sparse_amplitudes = st.dictionaries(occupations, complex_amp, min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(sparse_amplitudes, sparse_amplitudes)
def test_inner_product_hermitian_symmetry(amps_x, amps_y):
    x = FockState(PAIR, 4, amps_x)
    y = FockState(PAIR, 4, amps_y)
    assert inner_product(x, y) == pytest.approx(inner_product(y, x).conjugate())


@settings(max_examples=60, deadline=None)
@given(sparse_amplitudes)
def test_inner_product_with_self_is_norm_squared(amps):
    x = FockState(PAIR, 4, amps)
    assert inner_product(x, x).real == pytest.approx(x.norm_squared())
    assert inner_product(x, x).imag == pytest.approx(0.0)


def test_tensor_of_vacua():
    left = create_vacuum(minkowski_pair(0.25), 6)
    right = create_vacuum(minkowski_pair(0.5), 6)
    product = tensor(left, right)
    assert product.amplitudes == {(0, 0, 0, 0): 1.0 + 0j}
    assert product.modes == left.modes + right.modes


def test_tensor_norm_multiplies():
    rng = np.random.default_rng(3)
    left = random_sparse_state(rng, minkowski_pair(0.25), 4, 5).normalize()
    right = random_sparse_state(rng, minkowski_pair(0.5), 4, 5).normalize()
    assert tensor(left, right).norm() == pytest.approx(1.0)


def test_tensor_rejects_overlap_and_mixed_caps():
    with pytest.raises(ConfigurationError):
        tensor(create_vacuum(PAIR, 5), create_vacuum(PAIR, 5))
    with pytest.raises(ConfigurationError):
        tensor(create_vacuum(minkowski_pair(0.25), 5), create_vacuum(minkowski_pair(0.5), 6))


def test_number_expectation_geometric_series():
    # normalized sum of eps^n |n,n> at eps = 0.5; the expectation follows the
    # geometric law sum n (1-x) x^n = x / (1-x) = 1/3
    eps = 0.5
    amps = {(n, n): eps**n + 0j for n in range(40)}
    state = FockState(PAIR, 40, amps).normalize()
    brute = sum(n * abs(a) ** 2 for (n, _), a in state.amplitudes.items())
    for mode in PAIR:
        assert number_expectation(state, mode) == pytest.approx(brute, abs=1e-14)
        assert number_expectation(state, mode) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_basis_state_expectation():
    state = FockState(PAIR, 5, {(3, 0): 1.0 + 0j})
    assert number_expectation(state, PAIR[0]) == pytest.approx(3.0)


def test_normalize_zero_state_rejected():
    mode = minkowski_mode(Branch.I, 1.0)
    zero = apply_ladder(create_vacuum((mode,), 5), mode, Ladder.ANNIHILATE)
    with pytest.raises(DomainError):
        zero.normalize()


def test_prune_bookkeeping():
    state = FockState(PAIR, 5, {(0, 0): 1.0 + 0j, (1, 1): 1e-16 + 0j})
    pruned = state.prune()
    assert (1, 1) not in pruned.amplitudes
    assert pruned.truncation_loss == pytest.approx(1e-32, rel=1e-6)
    assert abs(pruned.norm() - state.norm()) < 1e-12


@settings(max_examples=40, deadline=None)
@given(sparse_amplitudes)
def test_prune_changes_norm_negligibly(amps):
    state = FockState(PAIR, 4, amps).normalize()
    assert abs(state.prune(1e-15).norm() - 1.0) < 1e-12


def test_norm_accounting_under_cap_hits():
    # pushing a normalized ladder of states over the cap moves weight from the
    # norm into truncation_loss one-for-one
    mode = minkowski_mode(Branch.I, 1.0)
    state = FockState((mode,), 3, {(n,): 0.5 + 0j for n in range(4)})
    out = apply_ladder(state, mode, Ladder.CREATE)
    expected_kept = sum((n + 1) * 0.25 for n in range(3))
    assert out.norm_squared() == pytest.approx(expected_kept)
    assert out.truncation_loss == pytest.approx(0.25)


def test_reorder_modes_roundtrip():
    a, b = minkowski_pair(0.25)
    c, d = minkowski_pair(0.5)
    state = FockState((a, b, c, d), 3, {(1, 2, 0, 3): 1.0 + 0j})
    swapped = reorder_modes(state, (a, c, b, d))
    assert swapped.amplitude((1, 0, 2, 3)) == 1.0 + 0j
    assert reorder_modes(swapped, (a, b, c, d)).amplitudes == state.amplitudes
    with pytest.raises(ConfigurationError):
        reorder_modes(state, (a, b, c, c))


def test_apply_polynomial_distributes():
    rng = np.random.default_rng(11)
    state = random_sparse_state(rng, PAIR, 4, 6)
    psi, psi_prime = PAIR
    p = OperatorPolynomial.ladder(psi, Ladder.CREATE, 0.7) + OperatorPolynomial.ladder(
        psi_prime, Ladder.ANNIHILATE, -0.2j
    )
    q = OperatorPolynomial.ladder(psi, Ladder.ANNIHILATE, 1.5)
    combined = to_dense(apply_polynomial(state, p * q, prune_threshold=0.0))
    sequential = to_dense(
        apply_polynomial(apply_polynomial(state, q, prune_threshold=0.0), p, prune_threshold=0.0)
    )
    np.testing.assert_allclose(combined, sequential, atol=1e-12)
