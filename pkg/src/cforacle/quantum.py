"""Coherent oracle simulation on the composite input/output register.

The oracle is the isometry |x> -> |x>|f(x)| applied to a superposed
input; averaging over the table distribution yields a joint density
matrix whose off-diagonal blocks carry every pairwise output marginal
p(f(x)=y, f(x')=y').  Reading those elements back out (tomography) is
what single classical queries cannot do.

Composite indexing convention throughout: basis state |x>|y> sits at
index x * n_y + y (input register most significant).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import FunctionDistribution, FunctionTable
from .errors import (
    DomainError,
    ExtractionError,
    MeasurementInconsistencyError,
    ValidationError,
)
from .rational import solve_unique

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
EXTRACTION_TOL = 1e-9
MEASUREMENT_TOL = 1e-10


@dataclass(frozen=True)
class Amplitudes:
    """A pure input-register state: one complex amplitude per input value."""

    alpha: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.alpha, dtype=complex)
        object.__setattr__(self, "alpha", arr)
        if arr.ndim != 1 or arr.size < 1:
            raise ValidationError("amplitudes must form a nonempty vector")
        norm = float(np.sum(np.abs(arr) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(
                f"amplitudes must be normalized, got |alpha|^2 = {norm!r}"
            )

    @classmethod
    def uniform(cls, n_x: int) -> "Amplitudes":
        return cls(np.full(n_x, 1.0 / np.sqrt(n_x), dtype=complex))

    @classmethod
    def basis(cls, n_x: int, x: int) -> "Amplitudes":
        vec = np.zeros(n_x, dtype=complex)
        vec[x] = 1.0
        return cls(vec)

    @property
    def n_x(self) -> int:
        return int(self.alpha.size)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix on the composite register."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError("density matrix must be square")
        herm = float(np.max(np.abs(arr - arr.conj().T)))
        if herm > HERMITICITY_TOL:
            raise ValidationError(f"not Hermitian: max |rho - rho^dag| = {herm:g}")
        trace = complex(np.trace(arr))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace must be 1, got {trace!r}")
        min_eig = float(np.min(np.linalg.eigvalsh((arr + arr.conj().T) / 2)))
        if min_eig < -PSD_TOL:
            raise ValidationError(
                f"not positive semidefinite: min eigenvalue {min_eig:g}"
            )

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": np.real(self.entries).tolist(),
            "im": np.imag(self.entries).tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DensityMatrix":
        dim = int(data["dim"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        if re.shape != (dim, dim) or im.shape != (dim, dim):
            raise ValidationError("re/im blocks must be dim x dim")
        return cls(re + 1j * im)


@dataclass(frozen=True)
class MeasurementEffect:
    """A POVM effect: Hermitian with spectrum inside [0, 1]."""

    operator: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.operator, dtype=complex)
        object.__setattr__(self, "operator", arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError("effect operator must be square")
        herm = float(np.max(np.abs(arr - arr.conj().T)))
        if herm > MEASUREMENT_TOL:
            raise ValidationError(f"effect not Hermitian: {herm:g}")
        eigs = np.linalg.eigvalsh((arr + arr.conj().T) / 2)
        if float(eigs.min()) < -MEASUREMENT_TOL or float(eigs.max()) > 1 + MEASUREMENT_TOL:
            raise ValidationError(
                f"effect eigenvalues outside [0, 1]: [{eigs.min():g}, {eigs.max():g}]"
            )

    @property
    def dim(self) -> int:
        return int(self.operator.shape[0])


def apply_oracle(f: FunctionTable, alpha: Amplitudes) -> np.ndarray:
    """The post-oracle pure state sum_x alpha_x |x>|f(x)> as a flat vector."""
    if alpha.n_x != f.n_x:
        raise ValidationError(
            f"amplitude vector has {alpha.n_x} entries, table expects {f.n_x}"
        )
    dim = f.n_x * f.n_y
    psi = np.zeros(dim, dtype=complex)
    for x in range(f.n_x):
        psi[x * f.n_y + f.outputs[x]] = alpha.alpha[x]
    return psi


def build_rho_xy(pF: FunctionDistribution, alpha: Amplitudes) -> DensityMatrix:
    """Average the post-oracle pure states over the table distribution.

    Matrix element <x, y| rho |x', y'> equals
    alpha_x * conj(alpha_x') * p(f(x)=y, f(x')=y').
    """
    if alpha.n_x != pF.n_x:
        raise ValidationError(
            f"amplitude vector has {alpha.n_x} entries, model expects {pF.n_x}"
        )
    support = pF.support()
    n_x, n_y = pF.n_x, pF.n_y
    dim = n_x * n_y
    k = len(support)
    # one row per support table: psi_k as in apply_oracle
    psi = np.zeros((k, dim), dtype=complex)
    rows = np.repeat(np.arange(k), n_x)
    outputs = np.array([t.outputs for t in support], dtype=np.int64)
    cols = (np.arange(n_x)[None, :] * n_y + outputs).reshape(-1)
    psi[rows, cols] = np.tile(alpha.alpha, k)
    weights = np.array([float(pF.weights[t]) for t in support])
    rho = (psi.T * weights) @ psi.conj()
    rho = (rho + rho.conj().T) / 2  # scrub float round-off asymmetry
    return DensityMatrix(rho)


def extract_two_way(
    rho: DensityMatrix,
    alpha: Amplitudes,
    x: int,
    x_prime: int,
    y: int,
    y_prime: int,
) -> float:
    """Read p(f(x)=y, f(x')=y') off the density matrix.

    Divides the (x y, x' y') element by alpha_x * conj(alpha_x'), which
    requires both amplitudes to be nonzero.  For x == x' the diagonal
    block only supports y == y', giving back the one-way marginal.
    """
    n_x = alpha.n_x
    n_y = rho.dim // n_x
    if n_x * n_y != rho.dim:
        raise ValidationError("amplitude count does not divide the matrix dimension")
    for name, value, bound in (
        ("x", x, n_x),
        ("x_prime", x_prime, n_x),
        ("y", y, n_y),
        ("y_prime", y_prime, n_y),
    ):
        if not 0 <= value < bound:
            raise DomainError(f"{name}={value} outside range [0, {bound})")
    a_x = complex(alpha.alpha[x])
    a_xp = complex(alpha.alpha[x_prime])
    if abs(a_x) < 1e-12 or abs(a_xp) < 1e-12:
        raise ExtractionError(
            f"cannot extract at inputs ({x}, {x_prime}): zero amplitude"
        )
    if x == x_prime:
        if y != y_prime:
            return 0.0
        value = complex(rho.entries[x * n_y + y, x * n_y + y]) / (abs(a_x) ** 2)
    else:
        element = complex(rho.entries[x * n_y + y, x_prime * n_y + y_prime])
        value = element / (a_x * np.conj(a_xp))
    if abs(value.imag) > EXTRACTION_TOL:
        raise ExtractionError(
            f"extracted value has imaginary part {value.imag:g}; "
            "matrix is not a valid oracle output"
        )
    real = value.real
    if real < -EXTRACTION_TOL or real > 1 + EXTRACTION_TOL:
        raise ExtractionError(
            f"extracted value {real!r} outside [0, 1] beyond tolerance"
        )
    return min(1.0, max(0.0, real))


def measure(rho: DensityMatrix, effect: MeasurementEffect) -> float:
    """Born probability trace(effect . rho), clamped to [0, 1]."""
    if rho.dim != effect.dim:
        raise ValidationError(
            f"dimension mismatch: rho is {rho.dim}, effect is {effect.dim}"
        )
    value = complex(np.trace(effect.operator @ rho.entries))
    if abs(value.imag) > MEASUREMENT_TOL:
        raise ValidationError(
            f"measurement probability has imaginary part {value.imag:g}"
        )
    return min(1.0, max(0.0, value.real))


def measure_shots(
    rho: DensityMatrix,
    effect: MeasurementEffect,
    shots: int,
    rng: np.random.Generator,
) -> float:
    """Finite-statistics variant: the frequency of ``shots`` Bernoulli
    trials at the exact Born probability."""
    if shots < 1:
        raise DomainError("shots must be at least 1")
    p = measure(rho, effect)
    return float(rng.binomial(shots, p)) / shots


def computational_effect(n_x: int, n_y: int, y: int) -> MeasurementEffect:
    """Project the output register onto |y>, ignoring the input register."""
    if not 0 <= y < n_y:
        raise DomainError(f"outcome {y} outside range [0, {n_y})")
    op = np.zeros((n_x * n_y, n_x * n_y), dtype=complex)
    for x in range(n_x):
        op[x * n_y + y, x * n_y + y] = 1.0
    return MeasurementEffect(op)


_BELL_VECTORS = {
    "phi_plus": ((1, 0, 0, 1), np.sqrt(0.5)),
    "phi_minus": ((1, 0, 0, -1), np.sqrt(0.5)),
    "psi_plus": ((0, 1, 1, 0), np.sqrt(0.5)),
    "psi_minus": ((0, 1, -1, 0), np.sqrt(0.5)),
}


def bell_effect(which: str = "phi_plus") -> MeasurementEffect:
    """Rank-one projector onto one of the four Bell states (dim 4)."""
    if which not in _BELL_VECTORS:
        raise DomainError(f"unknown Bell state {which!r}")
    pattern, scale = _BELL_VECTORS[which]
    vec = scale * np.array(pattern, dtype=complex)
    return MeasurementEffect(np.outer(vec, vec.conj()))


#: The three binary probe settings that pin down a 2 -> 2 distribution:
#: output statistics under each basis input, plus the Bell overlap of the
#: superposed probe.
BINARY_SCENARIOS = ("basis0", "basis1", "plus_bell")


def scenario_coefficient(f: FunctionTable, scenario: str) -> Fraction:
    """Exact Born probability of the scenario outcome for a single table.

    basis0 / basis1: probability of reading output 0 after preparing the
    corresponding basis input, which is 1 iff f maps it to 0.
    plus_bell: the Bell-state overlap of (|0, f(0)> + |1, f(1)>)/sqrt(2),
    equal to (m/2)^2 with m the number of fixed points of f.
    """
    if f.n_x != 2 or f.n_y != 2:
        raise DomainError("binary scenarios require a 2 -> 2 table")
    if scenario == "basis0":
        return Fraction(1 if f.outputs[0] == 0 else 0)
    if scenario == "basis1":
        return Fraction(1 if f.outputs[1] == 0 else 0)
    if scenario == "plus_bell":
        fixed_points = (f.outputs[0] == 0) + (f.outputs[1] == 1)
        return Fraction(fixed_points, 2) ** 2
    raise DomainError(f"unknown scenario {scenario!r}")


def scenario_probability_exact(
    pF: FunctionDistribution, scenario: str
) -> Fraction:
    """Exact rational outcome probability of one probe scenario."""
    if pF.n_x != 2 or pF.n_y != 2:
        raise DomainError("binary scenarios require a 2 -> 2 model")
    return sum(
        (w * scenario_coefficient(t, scenario) for t, w in pF.weights.items()),
        Fraction(0),
    )


def scenario_probability_simulated(
    pF: FunctionDistribution, scenario: str
) -> float:
    """The same probability through the full density-matrix pipeline."""
    if scenario == "basis0":
        rho = build_rho_xy(pF, Amplitudes.basis(2, 0))
        return measure(rho, computational_effect(2, 2, 0))
    if scenario == "basis1":
        rho = build_rho_xy(pF, Amplitudes.basis(2, 1))
        return measure(rho, computational_effect(2, 2, 0))
    if scenario == "plus_bell":
        rho = build_rho_xy(pF, Amplitudes.uniform(2))
        return measure(rho, bell_effect("phi_plus"))
    raise DomainError(f"unknown scenario {scenario!r}")


def binary_forward_measurements(
    pF: FunctionDistribution,
) -> tuple[Fraction, Fraction, Fraction]:
    """Exact (basis0, basis1, plus_bell) outcome probabilities."""
    return tuple(scenario_probability_exact(pF, s) for s in BINARY_SCENARIOS)


# Coefficient matrix of the binary identification system, in canonical
# table order [0,0], [0,1], [1,0], [1,1]:
#   basis0 row:    p([0,0]) + p([0,1])
#   basis1 row:    p([0,0]) + p([1,0])
#   plus_bell row: p([0,1]) + (p([0,0]) + p([1,1])) / 4
#   normalization: all ones
_SOLVE_MATRIX = [
    [Fraction(1), Fraction(1), Fraction(0), Fraction(0)],
    [Fraction(1), Fraction(0), Fraction(1), Fraction(0)],
    [Fraction(1, 4), Fraction(1), Fraction(0), Fraction(1, 4)],
    [Fraction(1), Fraction(1), Fraction(1), Fraction(1)],
]


def solve_binary_pF(c00, c01, bell) -> FunctionDistribution:
    """Recover the full binary table distribution from the three probe
    statistics (plus normalization).

    Inputs may be exact rationals or floats.  The 4x4 system always has a
    unique algebraic solution; if any component falls outside [0, 1] by
    more than 1e-9 the statistics are inconsistent and an error reports
    the violation.  Otherwise components are clamped and renormalized.
    """
    rhs = [Fraction(c00), Fraction(c01), Fraction(bell), Fraction(1)]
    solution = solve_unique(_SOLVE_MATRIX, rhs)
    assert solution is not None  # the matrix is invertible
    tol = Fraction(1, 10**9)
    low = min(solution)
    high = max(solution)
    residual = max(Fraction(0) - low, high - 1, Fraction(0))
    if residual > tol:
        raise MeasurementInconsistencyError(
            "measured statistics admit no distribution: component range "
            f"[{low}, {high}] exceeds [0, 1] by {residual}",
            residual=residual,
        )
    clamped = [min(max(v, Fraction(0)), Fraction(1)) for v in solution]
    total = sum(clamped)
    weights = {
        FunctionTable.from_index(2, 2, i): v / total
        for i, v in enumerate(clamped)
        if v > 0
    }
    return FunctionDistribution(2, 2, weights)


def tomography_sweep(
    rho: DensityMatrix, alpha: Amplitudes
) -> list[tuple[int, int, int, int, float]]:
    """Extract every pairwise marginal from the density matrix.

    Emits (x, x', y, y', value) rows: all output pairs for x < x', and
    the diagonal one-way marginals for x == x' (y == y' only).
    """
    n_x = alpha.n_x
    n_y = rho.dim // n_x
    rows = []
    for x in range(n_x):
        for y in range(n_y):
            rows.append((x, x, y, y, extract_two_way(rho, alpha, x, x, y, y)))
    for x in range(n_x):
        for x_prime in range(x + 1, n_x):
            for y in range(n_y):
                for y_prime in range(n_y):
                    rows.append(
                        (
                            x,
                            x_prime,
                            y,
                            y_prime,
                            extract_two_way(rho, alpha, x, x_prime, y, y_prime),
                        )
                    )
    return rows
