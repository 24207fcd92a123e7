import math

import pytest

from unruhsim import (
    AccelerationParams,
    Branch,
    ConfigurationError,
    FockState,
    Ladder,
    OperatorPolynomial,
    Scenario,
    ZeroProbabilityError,
    apply_ladder,
    apply_polynomial,
    bogoliubov_image,
    create_vacuum,
    energy_proxy,
    epr_postselect,
    eq8_amplitudes,
    fidelity,
    minkowski_pair,
    project_total_number,
    reorder_modes,
    rindler_mode,
    signal_transmission,
    single_frequency,
    tensor,
    transport_measured_sector,
    two_frequency,
    unruh_sector_state,
)

OMEGA_HALF = math.log(2.0) / math.pi       # epsilon = 0.5
OMEGA_ROOT2 = math.log(2.0) / (2 * math.pi)  # epsilon = 1/sqrt(2), the m=1 zero


def omega_for(eps):
    return -math.log(eps) / math.pi


def test_single_frequency_m0_diagnostics():
    omega = OMEGA_HALF
    result = single_frequency(omega, 0, truncation=30)
    x = 0.25
    assert result.scenario is Scenario.SINGLE_FREQUENCY
    assert result.outcome_probability == pytest.approx(1 - x, abs=1e-13)
    assert result.fidelity_oracle_analytic >= 1 - 1e-10
    report = result.entanglement["omega1"]
    assert report.negativity > 0
    weights = [(1 - x) * x**n for n in range(200)]
    expected_entropy = -sum(w * math.log2(w) for w in weights)
    assert report.entropy_bits == pytest.approx(expected_entropy, abs=1e-9)
    assert result.energy_proxy == pytest.approx(2 * omega * x / (1 - x), abs=1e-10)


def test_single_frequency_m1_support_law():
    eps = 0.45
    result = single_frequency(omega_for(eps), 1, truncation=25)
    state = result.state_oracle
    reference = {
        k: (-1.0) ** (k - 1) * (k * eps ** (k - 1) - (k + 1) * eps ** (k + 1))
        for k in range(26)
    }
    scale = state.amplitude((0, 0)).real / reference[0]
    for occ, amp in state.amplitudes.items():
        assert occ[0] == occ[1]
        assert amp.real == pytest.approx(scale * reference[occ[0]], abs=1e-12)


def test_single_frequency_low_squeezing_limit():
    result = single_frequency(3.0, 0, truncation=10)  # epsilon ~ 8e-5
    vac = create_vacuum(result.state_oracle.modes, 10)
    assert fidelity(result.state_oracle, vac) >= 1 - 1e-7
    assert result.energy_proxy < 1e-7
    assert result.entanglement["omega1"].negativity < 1e-3


def test_two_frequency_factorizes_into_sector_transports():
    omega1, omega2 = OMEGA_HALF, omega_for(0.4)
    result = two_frequency(omega1, omega2, 1, 2, truncation=16)
    p1 = AccelerationParams.from_omega(omega1)
    p2 = AccelerationParams.from_omega(omega2)
    product = tensor(
        transport_measured_sector(p1, 1, 16), transport_measured_sector(p2, 2, 16)
    )
    product = reorder_modes(product, result.state_oracle.modes)
    assert fidelity(result.state_oracle, product) >= 1 - 1e-12
    assert result.fidelity_oracle_analytic >= 1 - 1e-10


def test_two_frequency_joint_probability_is_thermal_product():
    omega1, omega2 = OMEGA_HALF, omega_for(0.4)
    m = 1
    result = two_frequency(omega1, omega2, m, m, truncation=16)
    footnote = 1.0
    for omega in (omega1, omega2):
        footnote *= math.exp(-2 * m * math.pi * omega) * (1 - math.exp(-2 * math.pi * omega))
    assert result.outcome_probability == pytest.approx(footnote, rel=1e-12)
    # independent route: sequential projections on the joint Rindler state
    joint = tensor(
        unruh_sector_state(AccelerationParams.from_omega(omega1), 16),
        unruh_sector_state(AccelerationParams.from_omega(omega2), 16),
    )
    first = project_total_number(joint, [rindler_mode(Branch.I, omega1)], m)
    second = project_total_number(
        first.collapsed, [rindler_mode(Branch.I, omega2)], m
    )
    assert result.outcome_probability == pytest.approx(
        first.probability * second.probability, rel=1e-12
    )


def test_two_frequency_support_is_pairwise_equal():
    result = two_frequency(OMEGA_HALF, omega_for(0.4), 1, 0, truncation=14)
    for i, j, k, l in result.state_oracle.amplitudes:
        assert (i, j) == (k, l)


def test_two_frequency_order_does_not_matter():
    omega1, omega2 = OMEGA_HALF, omega_for(0.35)
    forward = two_frequency(omega1, omega2, 1, 2, truncation=14)
    backward = two_frequency(omega2, omega1, 2, 1, truncation=14)
    assert forward.outcome_probability == pytest.approx(
        backward.outcome_probability, rel=1e-13
    )
    relabeled = reorder_modes(backward.state_oracle, forward.state_oracle.modes)
    assert fidelity(forward.state_oracle, relabeled) >= 1 - 1e-12


def test_two_frequency_requires_distinct_labels():
    with pytest.raises(ConfigurationError):
        two_frequency(OMEGA_HALF, OMEGA_HALF, 0, 0, truncation=10)


def test_eq8_amplitudes_closed_forms():
    p1 = AccelerationParams.from_omega(OMEGA_HALF)          # eps 0.5
    p2 = AccelerationParams.from_omega(omega_for(0.6))      # eps 0.6
    c1, c2 = eq8_amplitudes(p1, p2, 1, 1)
    assert c1 == pytest.approx((1 - 2 * 0.25) * 0.6, abs=1e-12)   # 0.30
    assert c2 == pytest.approx((1 - 2 * 0.36) * 0.5, abs=1e-12)   # 0.14
    c1, c2 = eq8_amplitudes(p1, p1, 0, 0)
    assert c1 == pytest.approx(-0.5, abs=1e-15)
    assert c2 == pytest.approx(-0.5, abs=1e-15)


def test_epr_matched_counts_near_degenerate_frequencies():
    result = epr_postselect(OMEGA_HALF, OMEGA_HALF * 1.001, 0, 0, truncation=20)
    report = result.entanglement["postselected"]
    assert report.concurrence >= 0.999
    assert result.fidelity_oracle_analytic >= 1 - 1e-10
    assert 0 < result.outcome_probability <= 1


def test_epr_worked_example_m1():
    result = epr_postselect(OMEGA_HALF, omega_for(0.6), 1, 1, truncation=25)
    c1, c2 = result.inputs["c1_closed_form"], result.inputs["c2_closed_form"]
    expected = 2 * abs(c1 * c2) / (c1 * c1 + c2 * c2)
    assert expected == pytest.approx(0.084 / 0.1096, abs=1e-10)
    assert result.entanglement["postselected"].concurrence == pytest.approx(
        expected, abs=1e-9
    )
    # the post-selected state carries exactly the two pair encodings
    keys = set(result.state_oracle.amplitudes)
    assert keys == {(1, 0, 1, 0), (0, 1, 0, 1)}
    # cross-check against the Schmidt entropy of the two-qubit encoding
    report = result.entanglement["postselected"]
    p1 = c1 * c1 / (c1 * c1 + c2 * c2)
    schmidt_entropy = -(p1 * math.log2(p1) + (1 - p1) * math.log2(1 - p1))
    assert report.entropy_bits == pytest.approx(schmidt_entropy, abs=1e-9)


def test_epr_concurrence_decays_with_detuning():
    values = []
    for ratio in (1.001, 1.01, 1.1, 1.5):
        result = epr_postselect(OMEGA_HALF, OMEGA_HALF * ratio, 1, 1, truncation=20)
        values.append(result.entanglement["postselected"].concurrence)
    assert values[0] >= 0.999
    assert all(b < a for a, b in zip(values, values[1:]))


def test_epr_single_root_kills_one_amplitude():
    result = epr_postselect(OMEGA_ROOT2, OMEGA_HALF, 1, 1, truncation=25)
    assert abs(result.state_oracle.amplitude((1, 0, 1, 0))) < 1e-12
    assert result.entanglement["postselected"].concurrence <= 1e-12
    # brute-force confirmation straight from the sector transports
    p1 = AccelerationParams.from_omega(OMEGA_ROOT2)
    p2 = AccelerationParams.from_omega(OMEGA_HALF)
    joint = tensor(transport_measured_sector(p1, 1, 25), transport_measured_sector(p2, 1, 25))
    two_photon = {
        occ: amp for occ, amp in joint.amplitudes.items() if sum(occ) == 2
    }
    norm = math.sqrt(sum(abs(a) ** 2 for a in two_photon.values()))
    # joint mode order is (psi1, psi1', psi2, psi2')
    assert abs(two_photon.get((1, 1, 0, 0), 0j)) / norm < 1e-12


def test_epr_double_root_is_zero_probability():
    omega1 = OMEGA_ROOT2                        # eps^2 = 1/2, zero for m=1
    omega2 = math.log(1.5) / (2 * math.pi)      # eps^2 = 2/3, zero for m=2
    with pytest.raises(ZeroProbabilityError):
        epr_postselect(omega1, omega2, 1, 2, truncation=45)


@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
def test_signal_transmission_is_perfect(eps):
    result = signal_transmission(omega_for(eps))
    assert result.fidelity_oracle_analytic == pytest.approx(1.0, abs=1e-12)
    assert result.outcome_probability == 1.0
    assert result.entanglement["omega0"].negativity == 0.0
    assert result.energy_proxy == pytest.approx(omega_for(eps), abs=1e-12)


def test_signal_amplitude_is_the_mixing_constant():
    eps = 0.5
    result = signal_transmission(omega_for(eps))
    assert result.inputs["pre_normalization_amplitude"] == pytest.approx(
        1.0 / math.sqrt(1 - eps * eps)
    )
    # the raw image of the creation operator on the vacuum has that amplitude
    params = AccelerationParams.from_omega(omega_for(eps))
    modes = minkowski_pair(params.omega_over_a)
    image = bogoliubov_image(
        OperatorPolynomial.ladder(rindler_mode(Branch.I, params.omega_over_a), Ladder.CREATE),
        params,
    )
    raw = apply_polynomial(create_vacuum(modes, 4), image)
    assert raw.amplitude((1, 0)).real == pytest.approx(1.0 / math.sqrt(0.75))
    assert raw.amplitude((0, 1)) == 0j


def test_dual_rail_qubit_survives_transport():
    # alpha on the wedge-I rail, beta on the wedge-II rail, same frequency:
    # both branches pick up the same constant, so the qubit is exact
    alpha, beta = 0.6, 0.8j
    params = AccelerationParams.from_omega(omega_for(0.5))
    omega = params.omega_over_a
    modes = minkowski_pair(omega)
    vacuum = create_vacuum(modes, 4)
    qubit_op = OperatorPolynomial.ladder(
        rindler_mode(Branch.I, omega), Ladder.CREATE, alpha
    ) + OperatorPolynomial.ladder(rindler_mode(Branch.II, omega), Ladder.CREATE, beta)
    transported = apply_polynomial(vacuum, bogoliubov_image(qubit_op, params)).normalize()
    target = FockState(modes, 4, {(1, 0): alpha + 0j, (0, 1): beta}).normalize()
    assert fidelity(transported, target) == pytest.approx(1.0, abs=1e-12)
    ratio = transported.amplitude((0, 1)) / transported.amplitude((1, 0))
    assert ratio == pytest.approx(beta / alpha, abs=1e-12)


def test_energy_proxy_basics():
    modes = minkowski_pair(0.3)
    assert energy_proxy(create_vacuum(modes, 4)) == 0.0
    one = FockState(modes, 4, {(1, 0): 1.0 + 0j})
    assert energy_proxy(one) == pytest.approx(0.3)


def test_energy_monotone_in_measured_count():
    params = AccelerationParams.from_omega(OMEGA_HALF)
    energies = [
        energy_proxy(transport_measured_sector(params, m, m + 30)) for m in range(4)
    ]
    assert all(b > a for a, b in zip(energies, energies[1:]))


def test_measurement_never_leaves_the_vacuum_untouched():
    for eps in (0.1, 0.4, 0.7):
        for m in (0, 1, 2):
            params = AccelerationParams.from_omega(omega_for(eps))
            state = transport_measured_sector(params, m, m + 30)
            vacuum_weight = abs(state.amplitude((0, 0))) ** 2
            assert vacuum_weight < 1.0 - params.x / 2


def test_protocol_results_carry_consistent_metadata():
    result = two_frequency(OMEGA_HALF, omega_for(0.4), 0, 1, truncation=14)
    assert 0 < result.outcome_probability <= 1
    assert result.truncation_loss >= 0
    assert result.inputs["m1"] == 0 and result.inputs["m2"] == 1
    assert set(result.entanglement) == {"omega1", "omega2"}
