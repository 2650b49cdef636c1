"""Epistemically restricted bit-pair model of the binary oracle scenario.

Each two-level register is modeled by two classical bits (z, x); an agent
may know at most one of them, so states of maximal knowledge are uniform
distributions over 4-element affine subspaces of the 16 ontic states.
The four binary oracles act as reversible phase-space permutations, and
all three probe scenarios of the coherent-oracle analysis come out with
exactly the same rational outcome probabilities.  The identification
advantage over single classical queries therefore does not require
quantum theory itself in the binary case.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .core import FunctionDistribution, FunctionTable
from .errors import DomainError, UnsupportedTableError, ValidationError
from .quantum import BINARY_SCENARIOS, scenario_probability_exact

#: Ontic state layout: (z1, x1, z2, x2).  Register 1 carries the input
#: variable, register 2 the output ancilla (prepared at z2 = 0).
OnticState = tuple[int, int, int, int]

ALL_ONTIC_STATES: tuple[OnticState, ...] = tuple(product((0, 1), repeat=4))

PREPARATIONS = ("z0", "z1", "plus")
MEASUREMENT_SETTINGS = ("y_computational", "bell_parity")

#: Seed for the mixed-distribution test grid in verify_binary_equivalence.
GRID_SEED = 1148


@dataclass(frozen=True)
class ToyEpistemicState:
    """A probability distribution over the 16 ontic states."""

    probs: dict[OnticState, Fraction]

    def __post_init__(self):
        cleaned: dict[OnticState, Fraction] = {}
        for state, p in self.probs.items():
            state = tuple(int(b) for b in state)
            if len(state) != 4 or any(b not in (0, 1) for b in state):
                raise ValidationError(f"bad ontic state {state}")
            p = Fraction(p)
            if p < 0:
                raise ValidationError(f"negative probability at {state}")
            if p > 0:
                cleaned[state] = p
        if sum(cleaned.values(), Fraction(0)) != 1:
            raise ValidationError("ontic probabilities must sum to exactly 1")
        object.__setattr__(self, "probs", dict(sorted(cleaned.items())))

    def support(self) -> tuple[OnticState, ...]:
        return tuple(self.probs.keys())


def is_valid_epistemic_state(state: ToyEpistemicState) -> bool:
    """Maximal-knowledge validity: uniform over a 4-element affine
    subspace of (Z_2)^4 (closed under triple XOR)."""
    support = state.support()
    if len(support) != 4:
        return False
    if any(p != Fraction(1, 4) for p in state.probs.values()):
        return False
    points = {s for s in support}
    for a in support:
        for b in support:
            for c in support:
                xor = tuple(ai ^ bi ^ ci for ai, bi, ci in zip(a, b, c))
                if xor not in points:
                    return False
    return True


def toy_prepare(x_prep: str) -> ToyEpistemicState:
    """Joint preparation of the input register and the output ancilla.

    z0 / z1 fix the input z bit; "plus" fixes the input x bit to 0 and
    leaves z uniform.  The ancilla always has z2 = 0 with x2 uniform.
    """
    if x_prep == "z0":
        states = [(0, x1, 0, x2) for x1 in (0, 1) for x2 in (0, 1)]
    elif x_prep == "z1":
        states = [(1, x1, 0, x2) for x1 in (0, 1) for x2 in (0, 1)]
    elif x_prep == "plus":
        states = [(z1, 0, 0, x2) for z1 in (0, 1) for x2 in (0, 1)]
    else:
        raise DomainError(
            f"unknown preparation {x_prep!r}; expected one of {PREPARATIONS}"
        )
    quarter = Fraction(1, 4)
    return ToyEpistemicState({s: quarter for s in states})


@dataclass(frozen=True)
class ToyOraclePermutation:
    """A reversible update of the 16 ontic states, one per binary table."""

    table: FunctionTable
    mapping: dict[OnticState, OnticState]

    def __post_init__(self):
        if set(self.mapping.keys()) != set(ALL_ONTIC_STATES) or set(
            self.mapping.values()
        ) != set(ALL_ONTIC_STATES):
            raise ValidationError("oracle update must permute all 16 ontic states")

    def apply(self, state: ToyEpistemicState) -> ToyEpistemicState:
        out: dict[OnticState, Fraction] = {}
        for s, p in state.probs.items():
            image = self.mapping[s]
            out[image] = out.get(image, Fraction(0)) + p
        return ToyEpistemicState(out)


def _cnot(s: OnticState) -> OnticState:
    z1, x1, z2, x2 = s
    return (z1, x1 ^ x2, z2 ^ z1, x2)


def _flip_z2(s: OnticState) -> OnticState:
    z1, x1, z2, x2 = s
    return (z1, x1, z2 ^ 1, x2)


def toy_oracle(f: FunctionTable) -> ToyOraclePermutation:
    """Phase-space action of a binary oracle.

    The identity table acts as the bit-pair CNOT, the constant-0 table
    does nothing, the constant-1 table flips z2, and the flip table is
    the z2 flip composed after the CNOT.
    """
    if f.n_x != 2 or f.n_y != 2:
        raise UnsupportedTableError(
            f"toy oracles are defined for 2 -> 2 tables only, got"
            f" {f.n_x} -> {f.n_y}"
        )
    ident = FunctionTable.identity(2).outputs
    flip = FunctionTable.flip().outputs
    const0 = FunctionTable.constant(2, 2, 0).outputs
    if f.outputs == ident:
        update = _cnot
    elif f.outputs == const0:
        update = lambda s: s
    elif f.outputs == flip:
        update = lambda s: _flip_z2(_cnot(s))
    else:  # constant-1
        update = _flip_z2
    return ToyOraclePermutation(f, {s: update(s) for s in ALL_ONTIC_STATES})


def apply_oracle_mixture(
    state: ToyEpistemicState, pF: FunctionDistribution
) -> ToyEpistemicState:
    """Average the four oracle permutations over the table distribution."""
    if pF.n_x != 2 or pF.n_y != 2:
        raise UnsupportedTableError("toy oracle mixtures require a 2 -> 2 model")
    out: dict[OnticState, Fraction] = {}
    for table, w in pF.weights.items():
        image = toy_oracle(table).apply(state)
        for s, p in image.probs.items():
            out[s] = out.get(s, Fraction(0)) + w * p
    return ToyEpistemicState(out)


def toy_measure(state: ToyEpistemicState, setting: str):
    """Read out a toy measurement.

    y_computational returns (p(z2=0), p(z2=1)).  bell_parity returns the
    distribution over the joint parities (z1 xor z2, x1 xor x2); the
    (0, 0) outcome is the analogue of the maximally correlated Bell
    projection.
    """
    if setting == "y_computational":
        p0 = sum(
            (p for (z1, x1, z2, x2), p in state.probs.items() if z2 == 0),
            Fraction(0),
        )
        return (p0, 1 - p0)
    if setting == "bell_parity":
        outcomes = {
            (pz, px): Fraction(0) for pz in (0, 1) for px in (0, 1)
        }
        for (z1, x1, z2, x2), p in state.probs.items():
            outcomes[(z1 ^ z2, x1 ^ x2)] += p
        return outcomes
    raise DomainError(
        f"unknown setting {setting!r}; expected one of {MEASUREMENT_SETTINGS}"
    )


def toy_scenario_probability(pF: FunctionDistribution, scenario: str) -> Fraction:
    """Toy-model outcome probability of one of the binary probe scenarios."""
    if scenario == "basis0":
        state = apply_oracle_mixture(toy_prepare("z0"), pF)
        return toy_measure(state, "y_computational")[0]
    if scenario == "basis1":
        state = apply_oracle_mixture(toy_prepare("z1"), pF)
        return toy_measure(state, "y_computational")[0]
    if scenario == "plus_bell":
        state = apply_oracle_mixture(toy_prepare("plus"), pF)
        return toy_measure(state, "bell_parity")[(0, 0)]
    raise DomainError(f"unknown scenario {scenario!r}")


@dataclass(frozen=True)
class ToyComparison:
    scenario: str
    pF: FunctionDistribution
    quantum: Fraction
    toy: Fraction

    @property
    def equal(self) -> bool:
        return self.quantum == self.toy


@dataclass
class ToyEquivalenceReport:
    comparisons: list[ToyComparison]

    @property
    def all_equal(self) -> bool:
        return all(c.equal for c in self.comparisons)

    def mismatches(self) -> list[ToyComparison]:
        return [c for c in self.comparisons if not c.equal]

    def to_json_list(self) -> list[dict]:
        return [
            {
                "scenario": c.scenario,
                "pF": {
                    "".join(str(v) for v in t.outputs): str(w)
                    for t, w in c.pF.weights.items()
                },
                "quantum": str(c.quantum),
                "toy": str(c.toy),
                "equal": c.equal,
            }
            for c in self.comparisons
        ]


def equivalence_grid(num_mixtures: int = 10, seed: int = GRID_SEED):
    """The fixed test grid: all four point masses plus seeded random
    rational mixtures."""
    grid = [
        FunctionDistribution.point_mass(FunctionTable.from_index(2, 2, i))
        for i in range(4)
    ]
    rng = random.Random(seed)
    while len(grid) < 4 + num_mixtures:
        raw = [rng.randint(0, 12) for _ in range(4)]
        total = sum(raw)
        if total == 0:
            continue
        weights = {
            FunctionTable.from_index(2, 2, i): Fraction(k, total)
            for i, k in enumerate(raw)
            if k > 0
        }
        grid.append(FunctionDistribution(2, 2, weights))
    return grid


def verify_binary_equivalence(
    num_mixtures: int = 10, seed: int = GRID_SEED
) -> ToyEquivalenceReport:
    """Compare toy against exact coherent-probe probabilities on the full
    grid x scenario matrix.  Every comparison is an exact rational
    equality; mismatches are collected, never swallowed."""
    comparisons = []
    for pF in equivalence_grid(num_mixtures=num_mixtures, seed=seed):
        for scenario in BINARY_SCENARIOS:
            comparisons.append(
                ToyComparison(
                    scenario,
                    pF,
                    scenario_probability_exact(pF, scenario),
                    toy_scenario_probability(pF, scenario),
                )
            )
    return ToyEquivalenceReport(comparisons)
