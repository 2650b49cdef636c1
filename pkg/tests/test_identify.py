"""Constraint systems, partial-identification bounds, identifiability."""

import random
from fractions import Fraction

import pytest

from cforacle import (
    Bounds,
    ConstraintLevel,
    ConstraintSystem,
    CounterfactualQuery,
    FunctionDistribution,
    FunctionTable,
    LinearTarget,
    ValidationError,
    build_constraints,
    constant_mixture,
    is_identifiable,
    joint_counterfactual,
    lp_bounds,
    lp_bounds_with_witnesses,
    permutation_mixture,
    reproduce_appendix_b,
    reproduce_appendix_e_general,
    restricted_tail_model,
    solution_family_direction,
    vertex_bounds,
)
from cforacle.rational import is_scalar_multiple
from cforacle.reproduce import (
    affine_ternary_model,
    mix_constants,
    mix_identity_flip,
    model_satisfies,
    uniform_ternary_model,
)
from conftest import binary_distribution

F = Fraction


def random_distribution(rng, n_x, n_y):
    tables = [
        FunctionTable.from_index(n_x, n_y, i) for i in range(n_y**n_x)
    ]
    raw = [rng.randint(0, 9) for _ in tables]
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return FunctionDistribution(
        n_x, n_y, {t: F(k, total) for t, k in zip(tables, raw) if k}
    )


class TestBuildConstraints:
    def test_binary_one_way_rows(self):
        system = build_constraints(mix_identity_flip(), ConstraintLevel.ONE_WAY)
        rows = {tuple(int(c) for c in coeffs): rhs for coeffs, rhs in system.rows}
        # canonical table order: [0,0], [0,1], [1,0], [1,1]
        assert rows[(1, 1, 0, 0)] == F(1, 2)  # p(f(0)=0)
        assert rows[(1, 0, 1, 0)] == F(1, 2)  # p(f(1)=0)
        assert rows[(1, 1, 1, 1)] == 1
        assert len(system.rows) == 5

    def test_two_way_contains_one_way(self):
        pf = random_distribution(random.Random(3), 3, 2)
        one = build_constraints(pf, ConstraintLevel.ONE_WAY)
        two = build_constraints(pf, ConstraintLevel.TWO_WAY)
        assert set(one.rows) <= set(two.rows)

    def test_uniform_pair_constraints(self):
        system = build_constraints(restricted_tail_model(3, ()), "two-way")
        pair_rows = [
            (coeffs, rhs)
            for coeffs, rhs in system.rows
            if sum(coeffs) == 2  # exactly two tables satisfy a pair pattern
        ]
        assert len(pair_rows) == 12
        assert all(rhs == F(1, 4) for _, rhs in pair_rows)

    def test_single_value_cardinalities(self):
        pf = FunctionDistribution.point_mass(FunctionTable(1, 1, (0,)))
        system = build_constraints(pf, ConstraintLevel.ONE_WAY)
        assert all(rhs == 1 for _, rhs in system.rows)

    def test_level_parsing(self):
        assert ConstraintLevel.parse("one-way") is ConstraintLevel.ONE_WAY
        assert ConstraintLevel.parse("TWO_WAY") is ConstraintLevel.TWO_WAY
        with pytest.raises(ValidationError):
            ConstraintLevel.parse("three-way")

    def test_normalization_row_required(self):
        with pytest.raises(ValidationError, match="normalization"):
            ConstraintSystem(2, 2, (((F(1), F(0), F(0), F(0)), F(1)),))


class TestBounds:
    def test_bounds_invariant(self):
        with pytest.raises(ValidationError):
            Bounds(F(1, 2), F(1, 4))
        assert Bounds(F(1, 4), F(1, 2)).width == F(1, 4)

    def test_width_zero_for_pinned_target(self):
        pf = mix_identity_flip()
        system = build_constraints(pf, ConstraintLevel.ONE_WAY)
        target = LinearTarget.from_query(CounterfactualQuery(((0, 0),)), 2, 2)
        bounds = lp_bounds(target, system)
        assert bounds.lo == bounds.hi == F(1, 2)

    def test_point_mass_full_determination(self):
        rng = random.Random(11)
        for n_x, n_y in ((2, 2), (3, 2)):
            index = rng.randrange(n_y**n_x)
            pf = FunctionDistribution.point_mass(
                FunctionTable.from_index(n_x, n_y, index)
            )
            system = build_constraints(pf, ConstraintLevel.TWO_WAY)
            coeffs = tuple(
                F(rng.randint(0, 1)) for _ in range(n_y**n_x)
            )
            target = LinearTarget(coeffs)
            bounds = lp_bounds(target, system)
            assert bounds.lo == bounds.hi == target.value_on(pf)

    def test_true_model_always_inside(self):
        rng = random.Random(7)
        for _ in range(10):
            pf = random_distribution(rng, 2, 2)
            for level in ConstraintLevel:
                system = build_constraints(pf, level)
                q = CounterfactualQuery(((0, rng.randrange(2)), (1, rng.randrange(2))))
                target = LinearTarget.from_query(q, 2, 2)
                bounds = lp_bounds(target, system)
                assert bounds.lo <= target.value_on(pf) <= bounds.hi

    def test_simplex_vs_vertex_enumeration(self):
        rng = random.Random(23)
        for n_x, n_y in ((2, 2), (3, 2)):
            for _ in range(5):
                pf = random_distribution(rng, n_x, n_y)
                for level in ConstraintLevel:
                    system = build_constraints(pf, level)
                    coeffs = tuple(
                        F(rng.randint(0, 1)) for _ in range(n_y**n_x)
                    )
                    target = LinearTarget(coeffs)
                    assert lp_bounds(target, system) == vertex_bounds(target, system)


class TestIdentifiability:
    def test_binary_one_way_not_identifiable(self):
        truth = mix_identity_flip()
        system = build_constraints(truth, ConstraintLevel.ONE_WAY)
        target = LinearTarget.from_query(
            CounterfactualQuery(((0, 0), (1, 0))), 2, 2
        )
        result = is_identifiable(target, system)
        assert not result.identifiable
        assert (result.bounds.lo, result.bounds.hi) == (F(0), F(1, 2))
        assert result.witness_lo == truth
        assert result.witness_hi == mix_constants()
        assert model_satisfies(system, result.witness_lo)
        assert model_satisfies(system, result.witness_hi)

    def test_binary_two_way_identifies_everything(self):
        rng = random.Random(5)
        pf = random_distribution(rng, 2, 2)
        system = build_constraints(pf, ConstraintLevel.TWO_WAY)
        for index in range(16):
            coeffs = tuple(F((index >> k) & 1) for k in range(4))
            result = is_identifiable(LinearTarget(coeffs), system)
            assert result.identifiable

    def test_ternary_three_way_open_under_two_way(self):
        model_a = uniform_ternary_model()
        model_b = affine_ternary_model()
        system = build_constraints(model_a, ConstraintLevel.TWO_WAY)
        target = LinearTarget.from_query(
            CounterfactualQuery(((0, 0), (1, 1), (2, 2))), 3, 3
        )
        result = is_identifiable(target, system)
        assert not result.identifiable
        assert model_satisfies(system, model_b)  # both models feasible
        assert result.bounds.lo <= F(1, 27) < F(1, 9) <= result.bounds.hi
        assert target.value_on(result.witness_lo) == result.bounds.lo
        assert target.value_on(result.witness_hi) == result.bounds.hi

    def test_witnesses_attain_bounds(self):
        pf = binary_distribution(F(1, 6), F(1, 3), F(1, 4), F(1, 4))
        system = build_constraints(pf, ConstraintLevel.ONE_WAY)
        target = LinearTarget.from_query(
            CounterfactualQuery(((0, 0), (1, 1))), 2, 2
        )
        bounds, w_lo, w_hi = lp_bounds_with_witnesses(target, system)
        assert target.value_on(w_lo) == bounds.lo
        assert target.value_on(w_hi) == bounds.hi
        assert model_satisfies(system, w_lo) and model_satisfies(system, w_hi)


class TestMixtures:
    def test_permutation_and_constant_mixture_sizes(self):
        assert len(permutation_mixture(3).support()) == 6
        assert len(constant_mixture(3).support()) == 3

    def test_appendix_b_reports(self):
        for n in (2, 3):
            report = reproduce_appendix_b(n)
            assert report.passed, [c for c in report.claims if not c.passed]

    def test_appendix_b_values_directly(self):
        for n in (2, 3):
            perms = permutation_mixture(n)
            consts = constant_mixture(n)
            q = CounterfactualQuery(((0, 0), (1, 0)))
            assert joint_counterfactual(perms, q) == 0
            assert joint_counterfactual(consts, q) == F(1, n)

    def test_appendix_b_cap(self):
        from cforacle import EnumerationCapError

        with pytest.raises(EnumerationCapError):
            reproduce_appendix_b(30)


class TestSeparation:
    def test_two_way_data_beats_one_way_data_for_small_n(self):
        # n = 2: the conditioned-counterfactual numerator has positive
        # one-way width but is pinned by two-way data
        truth = mix_identity_flip()
        target = LinearTarget.from_query(
            CounterfactualQuery(((0, 0), (1, 0))), 2, 2
        )
        one = lp_bounds(target, build_constraints(truth, "one-way"))
        two = lp_bounds(target, build_constraints(truth, "two-way"))
        assert two.width == 0 < one.width

        # n = 3, 4: the all-ones n-way joint over the tail family
        for n, tail in ((3, ()), (4, (0,))):
            model = restricted_tail_model(n, tail)
            pairs = [(0, 1), (1, 1), (2, 1)] + [
                (3 + i, v) for i, v in enumerate(tail)
            ]
            target = LinearTarget.from_query(
                CounterfactualQuery(tuple(pairs)), n, 2
            )
            one = lp_bounds(target, build_constraints(model, "one-way"))
            two = lp_bounds(target, build_constraints(model, "two-way"))
            assert two.width < one.width
            assert two.hi < one.hi


class TestTailFamily:
    def test_reports_pass(self):
        for n, tail in ((3, ()), (4, (0,)), (5, (1, 0))):
            report = reproduce_appendix_e_general(n, tail)
            assert report.passed, [c for c in report.claims if not c.passed]

    def test_tail_validation(self):
        with pytest.raises(ValidationError):
            restricted_tail_model(4, ())
        with pytest.raises(ValidationError):
            restricted_tail_model(4, (2,))

    def test_solution_family_is_one_dimensional(self):
        system = build_constraints(restricted_tail_model(3, ()), "two-way")
        directions = solution_family_direction(system)
        assert len(directions) == 1
        parity = [
            F(1) if bin(i).count("1") % 2 else F(-1) for i in range(8)
        ]
        assert is_scalar_multiple(directions[0], parity)
