"""Identifiability analysis over the function-distribution simplex.

Each oracle access mode pins down an affine slice of the simplex: single
queries with classical readout fix the per-input output marginals, while
coherent queries additionally fix all pairwise output marginals.  A
counterfactual target is identifiable exactly when the induced linear
program has width zero; otherwise the LP yields the tight
partial-identification interval together with witness models at both
endpoints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from . import lp
from .core import (
    DEFAULT_ENUMERATION_CAP,
    CounterfactualQuery,
    FunctionDistribution,
    FunctionTable,
    conditional,
    enumerate_functions,
    joint_counterfactual,
)
from .errors import EnumerationCapError, ValidationError
from .rational import nullspace
from .report import ReproductionReport

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ConstraintLevel(enum.Enum):
    """How much of the function distribution an experiment reveals."""

    ONE_WAY = "one_way"
    TWO_WAY = "two_way"

    @classmethod
    def parse(cls, token: str) -> "ConstraintLevel":
        normalized = token.strip().lower().replace("-", "_")
        for level in cls:
            if level.value == normalized:
                return level
        raise ValidationError(
            f"unknown constraint level {token!r}; expected one-way or two-way"
        )


@dataclass(frozen=True)
class ConstraintSystem:
    """Affine constraints ``A p = b`` over the full table simplex.

    Coefficient vectors run over all n_y**n_x tables in canonical order.
    The all-ones normalization row must appear exactly once; duplicate or
    linearly dependent data rows are kept as given.  (In the degenerate
    one-table case every marginal row is syntactically all-ones, so the
    uniqueness check is waived there and only consistency is enforced.)
    """

    n_x: int
    n_y: int
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self):
        dim = self.n_y**self.n_x
        normalized_rows = []
        ones = 0
        for coeffs, rhs in self.rows:
            coeffs = tuple(Fraction(c) for c in coeffs)
            rhs = Fraction(rhs)
            if len(coeffs) != dim:
                raise ValidationError(
                    f"coefficient vector has {len(coeffs)} entries, expected {dim}"
                )
            if all(c == 1 for c in coeffs):
                ones += 1
                if rhs != 1:
                    raise ValidationError(
                        f"normalization row must have right-hand side 1, got {rhs}"
                    )
            normalized_rows.append((coeffs, rhs))
        if ones != 1 and not (dim == 1 and ones >= 1):
            raise ValidationError(
                f"system must contain the normalization row exactly once, found {ones}"
            )
        object.__setattr__(self, "rows", tuple(normalized_rows))

    @property
    def dimension(self) -> int:
        return self.n_y**self.n_x

    def matrix(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        a = [list(coeffs) for coeffs, _ in self.rows]
        b = [rhs for _, rhs in self.rows]
        return a, b


@dataclass(frozen=True)
class LinearTarget:
    """A linear functional ``sum_f c_f p(f)`` of the table distribution."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(Fraction(c) for c in self.coefficients)
        )

    @classmethod
    def from_query(
        cls, query: CounterfactualQuery, n_x: int, n_y: int,
        cap: int = DEFAULT_ENUMERATION_CAP,
    ) -> "LinearTarget":
        """Indicator coefficients of a joint counterfactual event."""
        query.validate_for(n_x, n_y)
        coeffs = [
            _ONE if all(t.outputs[x] == y for x, y in query.pairs) else _ZERO
            for t in enumerate_functions(n_x, n_y, cap=cap)
        ]
        return cls(tuple(coeffs))

    def value_on(self, pF: FunctionDistribution) -> Fraction:
        return sum(
            (self.coefficients[t.index] * w for t, w in pF.weights.items()),
            _ZERO,
        )


@dataclass(frozen=True)
class Bounds:
    """A tight partial-identification interval for a probability target."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not (0 <= self.lo <= self.hi <= 1):
            raise ValidationError(
                f"bounds must satisfy 0 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]"
            )

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _marginal_row(
    tables: list[FunctionTable], fixed: tuple[tuple[int, int], ...]
) -> tuple[Fraction, ...]:
    return tuple(
        _ONE if all(t.outputs[x] == y for x, y in fixed) else _ZERO
        for t in tables
    )


def build_constraints(
    pF_true: FunctionDistribution,
    level: ConstraintLevel | str,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ConstraintSystem:
    """The affine system an experiment at ``level`` reveals about pF_true.

    ONE_WAY fixes every p(f(x)=y); TWO_WAY additionally fixes every
    p(f(x)=y, f(x')=y') for x != x', so the two-way system contains the
    one-way system as a subset of rows.  Right-hand sides are evaluated
    exactly on ``pF_true``, and the normalization row is appended last.
    """
    if isinstance(level, str):
        level = ConstraintLevel.parse(level)
    n_x, n_y = pF_true.n_x, pF_true.n_y
    tables = enumerate_functions(n_x, n_y, cap=cap)
    rows: list[tuple[tuple[Fraction, ...], Fraction]] = []
    for x in range(n_x):
        cond = conditional(pF_true, x)
        for y in range(n_y):
            rows.append((_marginal_row(tables, ((x, y),)), cond[y]))
    if level is ConstraintLevel.TWO_WAY:
        for x, x_prime in combinations(range(n_x), 2):
            for y in range(n_y):
                for y_prime in range(n_y):
                    query = CounterfactualQuery(((x, y), (x_prime, y_prime)))
                    rows.append(
                        (
                            _marginal_row(tables, query.pairs),
                            joint_counterfactual(pF_true, query),
                        )
                    )
    rows.append(((_ONE,) * len(tables), _ONE))
    return ConstraintSystem(n_x, n_y, tuple(rows))


def _vector_to_distribution(
    vector: list[Fraction], n_x: int, n_y: int
) -> FunctionDistribution:
    weights = {
        FunctionTable.from_index(n_x, n_y, i): v
        for i, v in enumerate(vector)
        if v != 0
    }
    return FunctionDistribution(n_x, n_y, weights)


def lp_bounds(target: LinearTarget, system: ConstraintSystem) -> Bounds:
    """Exact min and max of the target over all distributions satisfying
    the system.  Raises :class:`InfeasibleSystemError` when empty."""
    if len(target.coefficients) != system.dimension:
        raise ValidationError("target dimension does not match the system")
    a, b = system.matrix()
    lo, hi = lp.objective_range(list(target.coefficients), a, b)
    return Bounds(lo, hi)


def lp_bounds_with_witnesses(
    target: LinearTarget, system: ConstraintSystem
) -> tuple[Bounds, FunctionDistribution, FunctionDistribution]:
    """Bounds plus feasible models attaining each endpoint.

    Ties are broken toward the lexicographically smallest optimal vertex
    under the canonical table ordering.
    """
    if len(target.coefficients) != system.dimension:
        raise ValidationError("target dimension does not match the system")
    a, b = system.matrix()
    c = list(target.coefficients)
    lo, _ = lp.simplex_minimize(c, a, b)
    hi, _ = lp.simplex_maximize(c, a, b)
    lo_vertex = lp.lexmin_optimal_vertex(c, a, b, lo)
    hi_vertex = lp.lexmin_optimal_vertex([-v for v in c], a, b, -hi)
    return (
        Bounds(lo, hi),
        _vector_to_distribution(lo_vertex, system.n_x, system.n_y),
        _vector_to_distribution(hi_vertex, system.n_x, system.n_y),
    )


def vertex_bounds(
    target: LinearTarget, system: ConstraintSystem, max_vars: int = 16
) -> Bounds:
    """Bounds by brute-force vertex enumeration; cross-check for lp_bounds."""
    a, b = system.matrix()
    lo, hi = lp.vertex_objective_range(
        list(target.coefficients), a, b, max_vars=max_vars
    )
    return Bounds(lo, hi)


@dataclass(frozen=True)
class IdentifiabilityResult:
    identifiable: bool
    bounds: Bounds
    witness_lo: FunctionDistribution
    witness_hi: FunctionDistribution


def is_identifiable(
    target: LinearTarget, system: ConstraintSystem
) -> IdentifiabilityResult:
    """A target is identifiable iff its LP width is exactly zero.

    When it is not, the two witnesses are distributions consistent with
    the system that realize the extreme values.
    """
    bounds, w_lo, w_hi = lp_bounds_with_witnesses(target, system)
    return IdentifiabilityResult(bounds.width == 0, bounds, w_lo, w_hi)


def solution_family_direction(system: ConstraintSystem) -> list[list[Fraction]]:
    """Basis of the directions along which the system leaves p(F) free.

    The affine solution set of ``A p = b`` is a translate of the null
    space of A; a one-dimensional null space means a one-parameter family.
    """
    a, _ = system.matrix()
    return nullspace(a, system.dimension)


def permutation_mixture(n: int) -> FunctionDistribution:
    """Equal mixture of all n! bijections of {0..n-1}."""
    tables = [FunctionTable(n, n, perm) for perm in permutations(range(n))]
    return FunctionDistribution.uniform_over(tables)


def constant_mixture(n: int) -> FunctionDistribution:
    """Equal mixture of the n input-discarding constant maps."""
    tables = [FunctionTable.constant(n, n, y) for y in range(n)]
    return FunctionDistribution.uniform_over(tables)


def reproduce_appendix_b(
    n: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> ReproductionReport:
    """Permutation versus constant mixtures of cardinality n.

    Both agree on every conditional (all equal 1/n), yet assign 0 versus
    1/n to every repeated-outcome pair p(Y_x = y, Y_x' = y) with x != x',
    so those joints cannot be told apart by single-query statistics.
    """
    if n < 2:
        raise ValidationError("needs n >= 2")
    if math.factorial(n) > cap or n**n > cap:
        raise EnumerationCapError(
            f"n={n} needs {math.factorial(n)} permutations and {n**n} tables, "
            f"exceeding the cap {cap}"
        )
    report = ReproductionReport(f"appendix_b[n={n}]")
    perms = permutation_mixture(n)
    consts = constant_mixture(n)
    expected = Fraction(1, n)
    perm_conditionals = {
        conditional(perms, x)[y] for x in range(n) for y in range(n)
    }
    const_conditionals = {
        conditional(consts, x)[y] for x in range(n) for y in range(n)
    }
    report.check(
        f"permutation mixture: all conditionals equal 1/{n}",
        {expected},
        perm_conditionals,
    )
    report.check(
        f"constant mixture: all conditionals equal 1/{n}",
        {expected},
        const_conditionals,
    )
    perm_joints = set()
    const_joints = set()
    for x, x_prime in combinations(range(n), 2):
        for y in range(n):
            query = CounterfactualQuery(((x, y), (x_prime, y)))
            perm_joints.add(joint_counterfactual(perms, query))
            const_joints.add(joint_counterfactual(consts, query))
    report.check(
        "permutation mixture: repeated-outcome two-way joints all zero",
        {_ZERO},
        perm_joints,
    )
    report.check(
        f"constant mixture: repeated-outcome two-way joints all 1/{n}",
        {expected},
        const_joints,
    )
    return report


def restricted_tail_model(n: int, fixed_tail: tuple[int, ...]) -> FunctionDistribution:
    """Binary-output model on n inputs, uniform over the first three
    coordinates and deterministic on the rest.

    Support: the 8 tables with (f(0), f(1), f(2)) free in {0,1}^3 and
    f(3+i) pinned to fixed_tail[i].
    """
    if n < 3:
        raise ValidationError("needs n >= 3")
    if len(fixed_tail) != n - 3:
        raise ValidationError(
            f"fixed_tail must have length n-3={n - 3}, got {len(fixed_tail)}"
        )
    if any(v not in (0, 1) for v in fixed_tail):
        raise ValidationError("fixed_tail entries must be bits")
    tables = [
        FunctionTable(n, 2, head + tuple(fixed_tail))
        for head in product((0, 1), repeat=3)
    ]
    return FunctionDistribution.uniform_over(tables)


def reproduce_appendix_e_general(
    n: int, fixed_tail: tuple[int, ...], cap: int = DEFAULT_ENUMERATION_CAP
) -> ReproductionReport:
    """Single-query versus coherent-query bounds on an n-way joint.

    The all-ones n-way target over the restricted tail model caps at 1/2
    under one-way constraints (perfect correlation is feasible) but at 1/4
    once all two-way marginals are pinned.
    """
    if 2**n > cap:
        raise EnumerationCapError(
            f"2^{n} = {2**n} tables exceeds the enumeration cap {cap}"
        )
    report = ReproductionReport(f"appendix_e_general[n={n}, tail={list(fixed_tail)}]")
    model = restricted_tail_model(n, fixed_tail)
    pairs = [(0, 1), (1, 1), (2, 1)] + [
        (3 + i, v) for i, v in enumerate(fixed_tail)
    ]
    target = LinearTarget.from_query(
        CounterfactualQuery(tuple(pairs)), n, 2, cap=cap
    )
    classical = build_constraints(model, ConstraintLevel.ONE_WAY, cap=cap)
    quantum = build_constraints(model, ConstraintLevel.TWO_WAY, cap=cap)
    classical_bounds = lp_bounds(target, classical)
    quantum_bounds = lp_bounds(target, quantum)
    report.check(
        "one-way upper bound on the n-way joint", Fraction(1, 2), classical_bounds.hi
    )
    report.check("one-way lower bound", _ZERO, classical_bounds.lo)
    report.check(
        "two-way upper bound on the n-way joint", Fraction(1, 4), quantum_bounds.hi
    )
    report.check("two-way lower bound", _ZERO, quantum_bounds.lo)
    report.check_that(
        "two-way bound strictly tighter than one-way",
        quantum_bounds.hi < classical_bounds.hi,
        (quantum_bounds.hi, classical_bounds.hi),
    )
    return report
