"""Density-matrix oracle simulation and the binary identification solve."""

import math
from fractions import Fraction

import numpy as np
import pytest

from cforacle import (
    Amplitudes,
    CounterfactualQuery,
    DensityMatrix,
    ExtractionError,
    FunctionDistribution,
    MeasurementEffect,
    MeasurementInconsistencyError,
    ValidationError,
    apply_oracle,
    bell_effect,
    binary_forward_measurements,
    build_rho_xy,
    computational_effect,
    extract_two_way,
    joint_counterfactual,
    make_rng,
    measure,
    measure_shots,
    scenario_probability_exact,
    scenario_probability_simulated,
    solve_binary_pF,
    tomography_sweep,
)
from cforacle.reproduce import uniform_ternary_model
from conftest import CONST0, CONST1, FLIP, IDENTITY, binary_distribution

F = Fraction
INV_SQRT2 = 1 / math.sqrt(2)


class TestApplyOracle:
    def test_identity_on_superposition_gives_max_entanglement(self):
        psi = apply_oracle(IDENTITY, Amplitudes.uniform(2))
        expected = np.array([INV_SQRT2, 0, 0, INV_SQRT2])
        assert np.allclose(psi, expected, atol=1e-12)

    def test_const1_on_basis_input(self):
        psi = apply_oracle(CONST1, Amplitudes.basis(2, 0))
        expected = np.zeros(4)
        expected[1] = 1.0  # |0>|1> at index 0*2+1
        assert np.allclose(psi, expected, atol=1e-12)

    def test_flip_on_superposition(self):
        psi = apply_oracle(FLIP, Amplitudes.uniform(2))
        expected = np.array([0, INV_SQRT2, INV_SQRT2, 0])
        assert np.allclose(psi, expected, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            apply_oracle(IDENTITY, Amplitudes.uniform(3))


class TestBuildRho:
    def test_uniform_binary_elements(self, uniform_binary):
        rho = build_rho_xy(uniform_binary, Amplitudes.uniform(2))
        assert rho.entries[0, 0] == pytest.approx(0.25, abs=1e-12)
        # <0,0|rho|1,0> = (1/2) p(f(0)=0, f(1)=0) = (1/2)(1/4)
        assert rho.entries[0, 2] == pytest.approx(0.125, abs=1e-12)

    def test_point_mass_is_projector(self):
        rho = build_rho_xy(
            FunctionDistribution.point_mass(IDENTITY), Amplitudes.uniform(2)
        )
        psi = apply_oracle(IDENTITY, Amplitudes.uniform(2))
        assert np.allclose(rho.entries, np.outer(psi, psi.conj()), atol=1e-12)
        assert rho.purity() == pytest.approx(1.0, abs=1e-9)

    def test_convexity(self):
        p = binary_distribution(F(1, 6), F(1, 3), F(1, 4), F(1, 4))
        q = binary_distribution(F(1, 2), 0, F(1, 2), 0)
        lam = F(2, 5)
        mixed = FunctionDistribution(
            2,
            2,
            {
                t: lam * p.probability(t) + (1 - lam) * q.probability(t)
                for t in set(p.support()) | set(q.support())
            },
        )
        alpha = Amplitudes.uniform(2)
        rho_mix = build_rho_xy(mixed, alpha)
        combo = (
            float(lam) * build_rho_xy(p, alpha).entries
            + (1 - float(lam)) * build_rho_xy(q, alpha).entries
        )
        assert np.max(np.abs(rho_mix.entries - combo)) <= 1e-12

    def test_diagonal_reproduces_weighted_conditionals(self):
        from cforacle import conditional

        pf = binary_distribution(F(1, 10), F(2, 5), F(3, 10), F(1, 5))
        alpha = Amplitudes(np.array([0.6, 0.8]))
        rho = build_rho_xy(pf, alpha)
        for x in range(2):
            cond = conditional(pf, x)
            for y in range(2):
                i = x * 2 + y
                expected = abs(alpha.alpha[x]) ** 2 * float(cond[y])
                assert abs(rho.entries[i, i].real - expected) <= 1e-12

    def test_invariants_validated(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]], dtype=complex))
        with pytest.raises(ValidationError, match="trace"):
            DensityMatrix(np.eye(2, dtype=complex))
        bad = np.array([[1.5, 0.0], [0.0, -0.5]], dtype=complex)
        with pytest.raises(ValidationError, match="semidefinite"):
            DensityMatrix(bad)

    def test_json_round_trip(self, uniform_binary):
        rho = build_rho_xy(uniform_binary, Amplitudes.uniform(2))
        data = rho.to_json_dict()
        assert data["dim"] == 4
        back = DensityMatrix.from_json_dict(data)
        assert np.allclose(back.entries, rho.entries, atol=0)


class TestExtraction:
    def test_uniform_pf(self, uniform_binary):
        rho = build_rho_xy(uniform_binary, Amplitudes.uniform(2))
        value = extract_two_way(rho, Amplitudes.uniform(2), 0, 1, 0, 0)
        assert value == pytest.approx(0.25, abs=1e-9)

    def test_point_identity(self):
        pf = FunctionDistribution.point_mass(IDENTITY)
        alpha = Amplitudes.uniform(2)
        rho = build_rho_xy(pf, alpha)
        assert extract_two_way(rho, alpha, 0, 1, 0, 1) == pytest.approx(1.0, abs=1e-9)

    def test_ternary_uniform(self):
        pf = uniform_ternary_model()
        alpha = Amplitudes.uniform(3)
        rho = build_rho_xy(pf, alpha)
        value = extract_two_way(rho, alpha, 0, 1, 0, 1)
        assert value == pytest.approx(1 / 9, abs=1e-9)

    def test_diagonal_case(self, uniform_binary):
        alpha = Amplitudes.uniform(2)
        rho = build_rho_xy(uniform_binary, alpha)
        assert extract_two_way(rho, alpha, 0, 0, 0, 0) == pytest.approx(0.5, abs=1e-9)
        assert extract_two_way(rho, alpha, 0, 0, 0, 1) == 0.0

    def test_zero_amplitude_rejected(self, uniform_binary):
        alpha = Amplitudes.basis(2, 0)
        rho = build_rho_xy(uniform_binary, alpha)
        with pytest.raises(ExtractionError):
            extract_two_way(rho, alpha, 0, 1, 0, 0)

    def test_round_trip_against_exact_joints(self):
        pf = binary_distribution(F(1, 6), F(1, 3), F(1, 4), F(1, 4))
        alpha = Amplitudes.uniform(2)
        rho = build_rho_xy(pf, alpha)
        for x in range(2):
            for x_prime in range(2):
                if x == x_prime:
                    continue
                for y in range(2):
                    for y_prime in range(2):
                        exact = joint_counterfactual(
                            pf, CounterfactualQuery(((x, y), (x_prime, y_prime)))
                        )
                        value = extract_two_way(rho, alpha, x, x_prime, y, y_prime)
                        assert abs(value - float(exact)) <= 1e-9

    def test_larger_support_round_trip(self):
        # 32-table support exercises the vectorized state assembly
        pf = FunctionDistribution.uniform(5, 2)
        alpha = Amplitudes.uniform(5)
        rho = build_rho_xy(pf, alpha)
        for x, x_prime in ((0, 4), (2, 3)):
            for y in range(2):
                exact = joint_counterfactual(
                    pf, CounterfactualQuery(((x, y), (x_prime, y)))
                )
                value = extract_two_way(rho, alpha, x, x_prime, y, y)
                assert abs(value - float(exact)) <= 1e-9

    def test_tomography_sweep_matches_joints(self, uniform_binary):
        alpha = Amplitudes.uniform(2)
        rho = build_rho_xy(uniform_binary, alpha)
        rows = tomography_sweep(rho, alpha)
        assert len(rows) == 4 + 4  # 4 diagonal one-way rows + 4 pair rows
        for x, x_prime, y, y_prime, value in rows:
            if x == x_prime:
                continue
            exact = joint_counterfactual(
                uniform_binary, CounterfactualQuery(((x, y), (x_prime, y_prime)))
            )
            assert abs(value - float(exact)) <= 1e-9


class TestMeasurement:
    def test_basis_probe_statistics(self):
        pf = binary_distribution(F(1, 10), F(2, 5), F(3, 10), F(1, 5))
        rho0 = build_rho_xy(pf, Amplitudes.basis(2, 0))
        effect = computational_effect(2, 2, 0)
        expected = float(pf.probability(CONST0) + pf.probability(IDENTITY))
        assert measure(rho0, effect) == pytest.approx(expected, abs=1e-10)
        rho1 = build_rho_xy(pf, Amplitudes.basis(2, 1))
        expected1 = float(pf.probability(CONST0) + pf.probability(FLIP))
        assert measure(rho1, effect) == pytest.approx(expected1, abs=1e-10)

    def test_bell_probe_statistics(self):
        pf = binary_distribution(F(1, 10), F(2, 5), F(3, 10), F(1, 5))
        rho = build_rho_xy(pf, Amplitudes.uniform(2))
        expected = float(
            pf.probability(IDENTITY)
            + F(1, 4) * (pf.probability(CONST0) + pf.probability(CONST1))
        )
        assert measure(rho, bell_effect()) == pytest.approx(expected, abs=1e-10)

    def test_dimension_mismatch(self, uniform_binary):
        rho = build_rho_xy(uniform_binary, Amplitudes.uniform(2))
        with pytest.raises(ValidationError):
            measure(rho, MeasurementEffect(np.eye(9)))

    def test_effect_validation(self):
        with pytest.raises(ValidationError):
            MeasurementEffect(2.0 * np.eye(2))

    def test_finite_shots(self, uniform_binary):
        rho = build_rho_xy(uniform_binary, Amplitudes.basis(2, 0))
        effect = computational_effect(2, 2, 0)
        freq = measure_shots(rho, effect, 10_000, make_rng(11))
        assert abs(freq - 0.5) < 0.05
        again = measure_shots(rho, effect, 10_000, make_rng(11))
        assert freq == again

    def test_simulated_matches_exact_scenarios(self):
        pf = binary_distribution(F(1, 6), F(1, 3), F(1, 4), F(1, 4))
        for scenario in ("basis0", "basis1", "plus_bell"):
            exact = float(scenario_probability_exact(pf, scenario))
            simulated = scenario_probability_simulated(pf, scenario)
            assert abs(exact - simulated) <= 1e-12


class TestSolveBinary:
    def test_uniform_from_forward_values(self, uniform_binary):
        stats = binary_forward_measurements(uniform_binary)
        assert stats == (F(1, 2), F(1, 2), F(3, 8))
        assert solve_binary_pF(*stats) == uniform_binary

    def test_point_identity(self):
        pf = solve_binary_pF(1, 0, 1)
        assert pf == FunctionDistribution.point_mass(IDENTITY)

    def test_distinguishes_equal_conditional_mixtures(self):
        mix_if = binary_distribution(0, F(1, 2), F(1, 2), 0)
        mix_consts = binary_distribution(F(1, 2), 0, 0, F(1, 2))
        assert binary_forward_measurements(mix_if) == (F(1, 2), F(1, 2), F(1, 2))
        assert binary_forward_measurements(mix_consts) == (
            F(1, 2),
            F(1, 2),
            F(1, 4),
        )
        assert solve_binary_pF(F(1, 2), F(1, 2), F(1, 2)) == mix_if
        assert solve_binary_pF(F(1, 2), F(1, 2), F(1, 4)) == mix_consts

    def test_round_trip_on_random_rational_models(self):
        import random

        rng = random.Random(515)
        for _ in range(50):
            raw = [rng.randint(0, 9) for _ in range(4)]
            if sum(raw) == 0:
                continue
            pf = binary_distribution(*[F(k, sum(raw)) for k in raw])
            assert solve_binary_pF(*binary_forward_measurements(pf)) == pf

    def test_inconsistent_statistics_rejected(self):
        with pytest.raises(MeasurementInconsistencyError) as excinfo:
            solve_binary_pF(1, 1, 1)
        assert excinfo.value.residual > 0

    def test_float_inputs_accepted(self, uniform_binary):
        pf = solve_binary_pF(0.5, 0.5, 0.375)
        for table in uniform_binary.support():
            assert abs(float(pf.probability(table)) - 0.25) <= 1e-9
