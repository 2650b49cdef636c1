"""Exact linear programming over small probability polytopes.

Two independent solution routes, kept deliberately separate so they can
cross-check each other:

* a two-phase primal simplex with Bland's anti-cycling rule, running
  entirely on :class:`fractions.Fraction` (no floating point anywhere), and
* brute-force vertex enumeration of the feasible polytope, practical for
  up to ~16 variables.

All problems have the form  min/max  c.x  subject to  A x = b,  x >= 0.
The systems built elsewhere in this package always include a simplex
normalization row, so feasible sets are bounded polytopes.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import InfeasibleSystemError, UnboundedProgramError, ValidationError
from .rational import Matrix, Vector, rref, solve_unique

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(tableau: Matrix, basis: list[int], row: int, col: int) -> None:
    inv = tableau[row][col]
    tableau[row] = [v / inv for v in tableau[row]]
    pivot_row = tableau[row]
    for i, current in enumerate(tableau):
        if i != row and current[col] != 0:
            factor = current[col]
            tableau[i] = [a - factor * b for a, b in zip(current, pivot_row)]
    basis[row] = col


def _iterate(tableau: Matrix, basis: list[int], n_cols: int) -> None:
    """Run Bland-rule simplex iterations until the cost row is optimal.

    The last tableau row is the reduced-cost row; the last column is the
    right-hand side.  Raises on an unbounded descent direction.
    """
    m = len(tableau) - 1
    while True:
        cost = tableau[m]
        enter = None
        for j in range(n_cols):
            if cost[j] < 0:
                enter = j
                break
        if enter is None:
            return
        leave = None
        best_ratio = None
        for i in range(m):
            coeff = tableau[i][enter]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise UnboundedProgramError(
                f"objective is unbounded along variable {enter}"
            )
        _pivot(tableau, basis, leave, enter)


def _cost_row(
    c: Vector, tableau: Matrix, basis: list[int], n_cols: int
) -> Vector:
    """Reduced costs c_j - c_B . (B^-1 A_j); last slot is the negated value."""
    row = list(c[:n_cols]) + [_ZERO]
    for i, bvar in enumerate(basis):
        cb = c[bvar]
        if cb != 0:
            for j in range(n_cols + 1):
                row[j] -= cb * tableau[i][j]
    return row


def simplex_minimize(
    c: Vector, a: Matrix, b: Vector
) -> tuple[Fraction, Vector]:
    """Minimize ``c . x`` over ``{A x = b, x >= 0}`` exactly.

    Returns the optimal value and one optimal basic feasible solution.
    Raises :class:`InfeasibleSystemError` (with a Farkas certificate) when
    the system has no nonnegative solution.
    """
    m = len(a)
    if m == 0:
        raise ValidationError("cannot solve an empty system")
    n = len(a[0])
    if len(b) != m or len(c) != n:
        raise ValidationError("dimension mismatch between c, A, b")

    signs = [1] * m
    rows = []
    rhs = []
    for i in range(m):
        if b[i] < 0:
            signs[i] = -1
            rows.append([-v for v in a[i]])
            rhs.append(-b[i])
        else:
            rows.append(list(a[i]))
            rhs.append(b[i])

    # Phase 1: artificial variables form the starting basis.
    width = n + m
    tableau: Matrix = []
    for i in range(m):
        art = [_ZERO] * m
        art[i] = _ONE
        tableau.append(rows[i] + art + [rhs[i]])
    basis = [n + i for i in range(m)]
    c1 = [_ZERO] * n + [_ONE] * m
    tableau.append(_cost_row(c1, tableau, basis, width))
    _iterate(tableau, basis, width)

    value1 = -tableau[m][-1]
    if value1 > 0:
        y = [
            sum(
                c1[basis[i]] * tableau[i][n + k]
                for i in range(m)
            )
            for k in range(m)
        ]
        certificate = [signs[k] * y[k] for k in range(m)]
        dot_b = sum(certificate[k] * b[k] for k in range(m))
        col_ok = all(
            sum(certificate[k] * a[k][j] for k in range(m)) <= 0
            for j in range(n)
        )
        assert dot_b > 0 and col_ok, "internal error: invalid Farkas certificate"
        raise InfeasibleSystemError(
            f"constraint system is infeasible (phase-1 residual {value1})",
            residual=value1,
            certificate=certificate,
        )

    # Drive artificial variables out of the basis; drop redundant rows.
    drop_rows: list[int] = []
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if tableau[i][j] != 0), None)
            if enter is None:
                drop_rows.append(i)
            else:
                _pivot(tableau, basis, i, enter)

    keep = [i for i in range(m) if i not in drop_rows]
    tableau2: Matrix = [
        [tableau[i][j] for j in range(n)] + [tableau[i][-1]] for i in keep
    ]
    basis2 = [basis[i] for i in keep]
    c2 = list(c)
    tableau2.append(_cost_row(c2, tableau2, basis2, n))
    _iterate(tableau2, basis2, n)

    x = [_ZERO] * n
    for i, bvar in enumerate(basis2):
        x[bvar] = tableau2[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return value, x


def simplex_maximize(
    c: Vector, a: Matrix, b: Vector
) -> tuple[Fraction, Vector]:
    value, x = simplex_minimize([-v for v in c], a, b)
    return -value, x


def objective_range(
    c: Vector, a: Matrix, b: Vector
) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of ``c . x`` over the feasible polytope."""
    lo, _ = simplex_minimize(c, a, b)
    hi, _ = simplex_maximize(c, a, b)
    return lo, hi


def _affine_unique_point(a: Matrix, b: Vector) -> Vector | None:
    """The single solution of ``A x = b`` if the affine set is a point."""
    n = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    reduced, pivots = rref(aug)
    if n in pivots or len(pivots) < n:
        return None
    x = [_ZERO] * n
    for row, col in zip(reduced, pivots):
        x[col] = row[-1]
    return x


def lexmin_optimal_vertex(
    c: Vector, a: Matrix, b: Vector, optimum: Fraction
) -> Vector:
    """Lexicographically smallest point of the optimal face of ``min c.x``.

    The optimal face is pinned by appending the row ``c.x = optimum``;
    coordinates are then minimized one at a time in index order.  The
    result is always a vertex of the feasible polytope.  Whenever the
    accumulated equalities already determine a single point, the remaining
    coordinate programs are skipped.
    """
    n = len(a[0])
    rows = [list(row) for row in a] + [list(c)]
    rhs = list(b) + [optimum]
    for j in range(n):
        point = _affine_unique_point(rows, rhs)
        if point is not None:
            assert all(v >= 0 for v in point)
            return point
        unit = [_ZERO] * n
        unit[j] = _ONE
        vj, _ = simplex_minimize(unit, rows, rhs)
        rows.append(unit)
        rhs.append(vj)
    point = _affine_unique_point(rows, rhs)
    assert point is not None and all(v >= 0 for v in point)
    return point


def enumerate_vertices(
    a: Matrix, b: Vector, max_vars: int = 16
) -> list[tuple[Fraction, ...]]:
    """All vertices of ``{A x = b, x >= 0}`` by basis enumeration.

    Exponential in the variable count; guarded by ``max_vars``.  The
    polytopes used in this package contain a normalization row, so they
    are bounded and every point is a convex combination of the result.
    """
    if not a:
        raise ValidationError("cannot enumerate an empty system")
    n = len(a[0])
    if n > max_vars:
        raise ValidationError(
            f"vertex enumeration limited to {max_vars} variables, got {n}"
        )
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    reduced, pivots = rref(aug)
    if n in pivots:
        raise InfeasibleSystemError("affine system is inconsistent")
    r = len(reduced)
    coeff = [row[:n] for row in reduced]
    d = [row[-1] for row in reduced]
    vertices: set[tuple[Fraction, ...]] = set()
    for subset in combinations(range(n), r):
        sub = [[coeff[i][j] for j in subset] for i in range(r)]
        solution = solve_unique(sub, d)
        if solution is None or any(v < 0 for v in solution):
            continue
        x = [_ZERO] * n
        for col, val in zip(subset, solution):
            x[col] = val
        vertices.add(tuple(x))
    if not vertices:
        raise InfeasibleSystemError(
            "no basic feasible solution: empty polytope"
        )
    return sorted(vertices)


def vertex_objective_range(
    c: Vector, a: Matrix, b: Vector, max_vars: int = 16
) -> tuple[Fraction, Fraction]:
    """(min, max) of ``c . x`` via explicit vertex enumeration.

    Independent cross-check for :func:`objective_range` on small systems.
    """
    values = [
        sum(ci * xi for ci, xi in zip(c, v))
        for v in enumerate_vertices(a, b, max_vars=max_vars)
    ]
    return min(values), max(values)
