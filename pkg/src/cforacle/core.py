"""Response-function causal models over finite variables.

A single cause X in {0..n_x-1} feeds a single effect Y in {0..n_y-1}
through an unknown deterministic map f.  All uncertainty lives in a
distribution over the n_y**n_x possible maps.  Every counterfactual
quantity is a functional of that distribution, and everything here is
computed in exact rational arithmetic so that identifiability questions
("is this value pinned down?") never hinge on a tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ContractViolationError,
    DomainError,
    EnumerationCapError,
    UndefinedConditionalError,
    ValidationError,
)

#: Hard ceiling on full function-table enumerations.  Operations that need
#: the complete table list fail loudly past this rather than sampling.
DEFAULT_ENUMERATION_CAP = 10**6


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise ValidationError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class FunctionTable:
    """One deterministic map f: {0..n_x-1} -> {0..n_y-1}.

    ``outputs[i]`` is f(i).  Tables are immutable and hashable so they can
    key probability maps.
    """

    n_x: int
    n_y: int
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(int(y) for y in self.outputs))
        if self.n_x < 1 or self.n_y < 1:
            raise ValidationError("cardinalities must be positive integers")
        if len(self.outputs) != self.n_x:
            raise ValidationError(
                f"outputs has {len(self.outputs)} entries, expected n_x={self.n_x}"
            )
        for i, y in enumerate(self.outputs):
            if not 0 <= y < self.n_y:
                raise ValidationError(
                    f"outputs[{i}]={y} outside range [0, {self.n_y})"
                )

    def __call__(self, x: int) -> int:
        if not 0 <= x < self.n_x:
            raise DomainError(f"input {x} outside range [0, {self.n_x})")
        return self.outputs[x]

    @property
    def index(self) -> int:
        """Canonical index: the integer whose base-n_y digits are the
        outputs, most significant digit first (= f(0))."""
        idx = 0
        for y in self.outputs:
            idx = idx * self.n_y + y
        return idx

    @classmethod
    def from_index(cls, n_x: int, n_y: int, index: int) -> "FunctionTable":
        if not 0 <= index < n_y**n_x:
            raise DomainError(f"index {index} outside range [0, {n_y}^{n_x})")
        digits = []
        for _ in range(n_x):
            digits.append(index % n_y)
            index //= n_y
        return cls(n_x, n_y, tuple(reversed(digits)))

    @classmethod
    def identity(cls, n: int) -> "FunctionTable":
        return cls(n, n, tuple(range(n)))

    @classmethod
    def constant(cls, n_x: int, n_y: int, y: int) -> "FunctionTable":
        return cls(n_x, n_y, (y,) * n_x)

    @classmethod
    def flip(cls) -> "FunctionTable":
        """The binary bit-flip map x -> 1 - x."""
        return cls(2, 2, (1, 0))

    def __repr__(self) -> str:
        return f"FunctionTable({self.n_x}->{self.n_y}, {list(self.outputs)})"


def enumerate_functions(
    n_x: int, n_y: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[FunctionTable]:
    """All n_y**n_x tables, exactly once, in lexicographic output order.

    Lexicographic order coincides with canonical-index order.  Raises
    :class:`EnumerationCapError` if the count would exceed ``cap``.
    """
    if n_x < 1 or n_y < 1:
        raise ValidationError("cardinalities must be positive integers")
    count = n_y**n_x
    if count > cap:
        raise EnumerationCapError(
            f"{n_y}^{n_x} = {count} function tables exceeds the enumeration cap {cap}"
        )
    return [
        FunctionTable(n_x, n_y, outs)
        for outs in itertools.product(range(n_y), repeat=n_x)
    ]


def _normalize_weights(
    n_x: int, n_y: int, weights: Mapping
) -> dict[FunctionTable, Fraction]:
    """Validate and canonicalize a table->probability mapping.

    Zero-weight entries are dropped; the result iterates in canonical
    index order.
    """
    cleaned: dict[FunctionTable, Fraction] = {}
    for table, w in weights.items():
        if not isinstance(table, FunctionTable):
            table = FunctionTable(n_x, n_y, tuple(table))
        if table.n_x != n_x or table.n_y != n_y:
            raise ValidationError(
                f"table {table} does not match cardinalities ({n_x}, {n_y})"
            )
        w = _as_fraction(w)
        if w < 0:
            raise ValidationError(f"weight of {table} is negative: {w}")
        if table in cleaned:
            raise ValidationError(f"duplicate weight entry for {table}")
        if w > 0:
            cleaned[table] = w
    total = sum(cleaned.values(), Fraction(0))
    if total != 1:
        raise ValidationError(f"weights sum to {total}, expected exactly 1")
    return dict(sorted(cleaned.items(), key=lambda kv: kv[0].index))


@dataclass(frozen=True)
class FunctionDistribution:
    """An exact probability distribution over function tables.

    The central unknown of the whole library: every observational,
    interventional and counterfactual quantity is a functional of it.
    """

    n_x: int
    n_y: int
    weights: Mapping[FunctionTable, Fraction]

    def __post_init__(self):
        object.__setattr__(
            self, "weights", _normalize_weights(self.n_x, self.n_y, self.weights)
        )

    @classmethod
    def point_mass(cls, table: FunctionTable) -> "FunctionDistribution":
        return cls(table.n_x, table.n_y, {table: Fraction(1)})

    @classmethod
    def uniform(
        cls, n_x: int, n_y: int, cap: int = DEFAULT_ENUMERATION_CAP
    ) -> "FunctionDistribution":
        tables = enumerate_functions(n_x, n_y, cap=cap)
        w = Fraction(1, len(tables))
        return cls(n_x, n_y, {t: w for t in tables})

    @classmethod
    def uniform_over(
        cls, tables: Iterable[FunctionTable]
    ) -> "FunctionDistribution":
        tables = list(tables)
        if not tables:
            raise ValidationError("cannot build a distribution over no tables")
        w = Fraction(1, len(tables))
        return cls(tables[0].n_x, tables[0].n_y, {t: w for t in tables})

    def probability(self, table: FunctionTable) -> Fraction:
        return self.weights.get(table, Fraction(0))

    def support(self) -> tuple[FunctionTable, ...]:
        return tuple(self.weights.keys())

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{list(t.outputs)}: {w}" for t, w in self.weights.items()
        )
        return f"FunctionDistribution({self.n_x}->{self.n_y}, {{{parts}}})"


@dataclass(frozen=True)
class CounterfactualQuery:
    """A joint counterfactual event: Y would be y_i under input x_i, jointly
    over all listed pairs.  Antecedents must be pairwise distinct."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(x), int(y)) for x, y in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ContractViolationError("query needs at least one (x, y) pair")
        xs = [x for x, _ in pairs]
        if len(set(xs)) != len(xs):
            raise ContractViolationError(
                f"antecedents must be pairwise distinct, got {xs}"
            )

    @classmethod
    def from_string(cls, text: str) -> "CounterfactualQuery":
        """Parse the CLI syntax ``"x:y,x':y'"``."""
        pairs = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                x_str, y_str = chunk.split(":")
                pairs.append((int(x_str), int(y_str)))
            except ValueError as exc:
                raise ContractViolationError(
                    f"malformed target pair {chunk!r}, expected 'x:y'"
                ) from exc
        return cls(tuple(pairs))

    def validate_for(self, n_x: int, n_y: int) -> None:
        for x, y in self.pairs:
            if not 0 <= x < n_x:
                raise DomainError(f"antecedent {x} outside range [0, {n_x})")
            if not 0 <= y < n_y:
                raise DomainError(f"outcome {y} outside range [0, {n_y})")


@dataclass(frozen=True)
class Evidence:
    """A single observed run: X was seen to be x_obs and Y to be y_obs."""

    x_obs: int
    y_obs: int


def conditional(pF: FunctionDistribution, x: int) -> tuple[Fraction, ...]:
    """p(Y=y | X=x) for every y, as an exact probability vector.

    With no confounder this is simultaneously the observational
    conditional, the do-conditional, and the one-way counterfactual
    p(Y_x = y).
    """
    if not 0 <= x < pF.n_x:
        raise DomainError(f"input {x} outside range [0, {pF.n_x})")
    vec = [Fraction(0)] * pF.n_y
    for table, w in pF.weights.items():
        vec[table.outputs[x]] += w
    return tuple(vec)


def joint_counterfactual(
    pF: FunctionDistribution, query: CounterfactualQuery
) -> Fraction:
    """Probability that f maps every queried x_i to its y_i simultaneously."""
    query.validate_for(pF.n_x, pF.n_y)
    total = Fraction(0)
    for table, w in pF.weights.items():
        if all(table.outputs[x] == y for x, y in query.pairs):
            total += w
    return total


def conditional_counterfactual(
    pF: FunctionDistribution, evidence: Evidence, x_cf: int, y_cf: int
) -> Fraction:
    """p(Y would be y_cf under do(X=x_cf) | observed X=x_obs, Y=y_obs).

    The ratio of the two-way joint over the evidence conditional.  When
    the counterfactual input equals the observed one the answer is the
    degenerate indicator of y_cf == y_obs.
    """
    if not 0 <= evidence.x_obs < pF.n_x or not 0 <= evidence.y_obs < pF.n_y:
        raise DomainError(f"evidence {evidence} out of range")
    if not 0 <= x_cf < pF.n_x or not 0 <= y_cf < pF.n_y:
        raise DomainError(f"counterfactual pair ({x_cf}, {y_cf}) out of range")
    denom = conditional(pF, evidence.x_obs)[evidence.y_obs]
    if denom == 0:
        raise UndefinedConditionalError(
            f"evidence (X={evidence.x_obs}, Y={evidence.y_obs}) has probability zero"
        )
    if x_cf == evidence.x_obs:
        return Fraction(1 if y_cf == evidence.y_obs else 0)
    num = joint_counterfactual(
        pF,
        CounterfactualQuery(((evidence.x_obs, evidence.y_obs), (x_cf, y_cf))),
    )
    return num / denom


def abduct_act_predict(
    pF: FunctionDistribution, evidence: Evidence, x_cf: int
) -> tuple[Fraction, ...]:
    """Three-step counterfactual estimation.

    Abduction: condition the table distribution on the evidence.
    Action: set X to x_cf.  Prediction: push the posterior through the
    table.  Agrees entry-wise with :func:`conditional_counterfactual`.
    """
    if not 0 <= evidence.x_obs < pF.n_x or not 0 <= evidence.y_obs < pF.n_y:
        raise DomainError(f"evidence {evidence} out of range")
    if not 0 <= x_cf < pF.n_x:
        raise DomainError(f"input {x_cf} outside range [0, {pF.n_x})")
    posterior: dict[FunctionTable, Fraction] = {}
    norm = Fraction(0)
    for table, w in pF.weights.items():
        if table.outputs[evidence.x_obs] == evidence.y_obs:
            posterior[table] = w
            norm += w
    if norm == 0:
        raise UndefinedConditionalError(
            f"evidence (X={evidence.x_obs}, Y={evidence.y_obs}) has probability zero"
        )
    vec = [Fraction(0)] * pF.n_y
    for table, w in posterior.items():
        vec[table.outputs[x_cf]] += w / norm
    return tuple(vec)


@dataclass(frozen=True)
class ConfoundedModel:
    """A joint distribution over (input setting, response table).

    Statistical dependence between the two coordinates models an
    unobserved common cause of X and Y.  Interventions on X sever it.
    """

    n_x: int
    n_y: int
    joint_weights: Mapping[tuple[int, FunctionTable], Fraction]

    def __post_init__(self):
        cleaned: dict[tuple[int, FunctionTable], Fraction] = {}
        for (r_x, table), w in self.joint_weights.items():
            r_x = int(r_x)
            if not isinstance(table, FunctionTable):
                table = FunctionTable(self.n_x, self.n_y, tuple(table))
            if not 0 <= r_x < self.n_x:
                raise ValidationError(f"input setting {r_x} out of range")
            if table.n_x != self.n_x or table.n_y != self.n_y:
                raise ValidationError(
                    f"table {table} does not match cardinalities"
                    f" ({self.n_x}, {self.n_y})"
                )
            w = _as_fraction(w)
            if w < 0:
                raise ValidationError(f"weight of ({r_x}, {table}) is negative")
            if w > 0:
                cleaned[(r_x, table)] = w
        total = sum(cleaned.values(), Fraction(0))
        if total != 1:
            raise ValidationError(f"joint weights sum to {total}, expected 1")
        ordered = dict(
            sorted(cleaned.items(), key=lambda kv: (kv[0][0], kv[0][1].index))
        )
        object.__setattr__(self, "joint_weights", ordered)

    @classmethod
    def product(
        cls, p_x: Sequence, pF: FunctionDistribution
    ) -> "ConfoundedModel":
        """Unconfounded model with independent input setting and table."""
        p_x = [_as_fraction(p) for p in p_x]
        if len(p_x) != pF.n_x:
            raise ValidationError("p_x length must equal n_x")
        joint = {
            (r_x, table): px * w
            for r_x, px in enumerate(p_x)
            for table, w in pF.weights.items()
        }
        return cls(pF.n_x, pF.n_y, joint)

    def response_marginal(self) -> FunctionDistribution:
        """Marginalize out the input setting."""
        weights: dict[FunctionTable, Fraction] = {}
        for (_, table), w in self.joint_weights.items():
            weights[table] = weights.get(table, Fraction(0)) + w
        return FunctionDistribution(self.n_x, self.n_y, weights)

    def input_marginal(self) -> tuple[Fraction, ...]:
        vec = [Fraction(0)] * self.n_x
        for (r_x, _), w in self.joint_weights.items():
            vec[r_x] += w
        return tuple(vec)


def observational_joint(m: ConfoundedModel) -> tuple[tuple[Fraction, ...], ...]:
    """p(X=x, Y=y) table; row index x, column index y."""
    table = [[Fraction(0)] * m.n_y for _ in range(m.n_x)]
    for (r_x, f), w in m.joint_weights.items():
        table[r_x][f.outputs[r_x]] += w
    return tuple(tuple(row) for row in table)


def do_conditional(m: ConfoundedModel, x: int) -> tuple[Fraction, ...]:
    """p(Y=y | do(X=x)): marginalize out the input setting, then evaluate.

    For product models this equals the observational conditional.
    """
    return conditional(m.response_marginal(), x)


def embed_square(pF: FunctionDistribution) -> FunctionDistribution:
    """Embed a model with unequal cardinalities into the square one with
    n = max(n_x, n_y) on both sides.

    Extra inputs are mapped to f(0)'s column by extending each table with
    output 0; extra output values simply receive probability zero.  All
    counterfactual quantities over the original ranges are unchanged.
    """
    n = max(pF.n_x, pF.n_y)
    if n == pF.n_x == pF.n_y:
        return pF
    weights = {}
    for table, w in pF.weights.items():
        outputs = table.outputs + (0,) * (n - pF.n_x)
        weights[FunctionTable(n, n, outputs)] = w
    return FunctionDistribution(n, n, weights)
