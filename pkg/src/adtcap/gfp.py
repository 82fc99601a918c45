"""Exact dense linear algebra over the prime field F_p.

Matrices are small (a layer cut rarely has more than a few dozen ports), so
rows are plain Python lists of ints.  Over F_2 the rank routine packs rows into
integers and eliminates with XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class ContractError(ValueError):
    """A caller broke an operation's precondition (shape, rank, field)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ContractError(f"field modulus must be prime, got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, -1, self.p)


@dataclass(frozen=True)
class FMatrix:
    """Row-major matrix over F_p.  ``ncols`` is explicit so 0-row matrices keep a width."""

    entries: tuple[tuple[int, ...], ...]
    ncols: int
    field: FieldSpec = FieldSpec()

    def __post_init__(self):
        p = self.field.p
        for r in self.entries:
            if len(r) != self.ncols:
                raise ContractError("ragged matrix rows")
            for e in r:
                if not 0 <= e < p:
                    raise ContractError(f"entry {e} outside [0, {p})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int = 2, ncols: int | None = None) -> "FMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(tuple(tuple(int(v) % p for v in r) for r in rows), ncols, FieldSpec(p))

    @classmethod
    def identity(cls, n: int, p: int = 2) -> "FMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], p, n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def transpose(self) -> "FMatrix":
        cols = tuple(tuple(r[j] for r in self.entries) for j in range(self.ncols))
        return FMatrix(cols, self.nrows, self.field)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def delete(self, row: int, col: int) -> "FMatrix":
        rows = tuple(
            tuple(v for j, v in enumerate(r) if j != col) for i, r in enumerate(self.entries) if i != row
        )
        return FMatrix(rows, self.ncols - 1, self.field)


@dataclass(frozen=True)
class DependencySolution:
    """Row indices ``lam`` of the basis and nonzero ``coeffs`` with target = sum(c * basis[j])."""

    lam: tuple[int, ...]
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.lam) != len(self.coeffs):
            raise ContractError("lambda and coefficient lengths differ")
        if len(set(self.lam)) != len(self.lam):
            raise ContractError("repeated index in lambda")
        if any(c == 0 for c in self.coeffs):
            raise ContractError("zero coefficient in dependency")

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.lam, self.coeffs))


# -- elimination kernels ------------------------------------------------------


def _rank_gf2(rows: Sequence[Sequence[int]]) -> int:
    packed = []
    for r in rows:
        v = 0
        for j, e in enumerate(r):
            if e & 1:
                v |= 1 << j
        if v:
            packed.append(v)
    rank = 0
    while packed:
        pivot = packed.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        packed = [r ^ pivot if r & low else r for r in packed]
    return rank


def rank_rows(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a list-of-rows matrix over F_p."""
    if not rows:
        return 0
    if p == 2:
        return _rank_gf2(rows)
    m = [[v % p for v in r] for r in rows]
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        inv = pow(prow[c], -1, p)
        for i in range(rank + 1, len(m)):
            f = m[i][c]
            if f:
                f = f * inv % p
                row = m[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == len(m):
            break
    return rank


def solve_linear(a: Sequence[Sequence[int]], b: Sequence[int], p: int) -> list[int] | None:
    """Solve ``a @ z = b`` over F_p for one solution ``z`` (free variables set to 0).

    Returns ``None`` when the system is inconsistent.  Raises ContractError if
    ``a`` does not have full column rank, since callers here always expect a
    unique solution.
    """
    nrows = len(a)
    if len(b) != nrows:
        raise ContractError("right-hand side length does not match row count")
    ncols = len(a[0]) if nrows else 0
    m = [[v % p for v in r] + [b[i] % p] for i, r in enumerate(a)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        prow = [v * inv % p for v in m[r]]
        m[r] = prow
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                row = m[i]
                for j in range(c, ncols + 1):
                    row[j] = (row[j] - f * prow[j]) % p
        pivots.append(c)
        r += 1
    if r < ncols:
        raise ContractError("coefficient matrix is not of full column rank")
    if any(m[i][ncols] for i in range(r, nrows)):
        return None
    z = [0] * ncols
    for i, c in enumerate(pivots):
        z[c] = m[i][ncols]
    return z


# -- public operations ----------------------------------------------------------


def rank(m: FMatrix) -> int:
    return rank_rows(m.entries, m.field.p)


def dependency_rows(basis: Sequence[Sequence[int]], target: Sequence[int], p: int) -> dict[int, int] | None:
    """List-level core of :func:`solve_dependency`: returns {row index: coeff} or None."""
    k = len(basis)
    if k == 0:
        return None if any(v % p for v in target) else {}
    width = len(basis[0])
    if len(target) != width:
        raise ContractError(f"target has length {len(target)}, basis has {width} columns")
    # target = sum_j a_j basis[j]  <=>  basis^T a = target
    bt = [[basis[j][c] for j in range(k)] for c in range(width)]
    z = solve_linear(bt, target, p)
    if z is None:
        return None
    return {j: a for j, a in enumerate(z) if a}


def solve_dependency(basis: FMatrix, target_row: Sequence[int]) -> DependencySolution | None:
    """Express ``target_row`` in the row space of a full-row-rank ``basis``.

    Returns the unique nonzero combination, or ``None`` when the target is
    independent of the basis rows.  A rank-deficient basis raises ContractError.
    """
    if len(target_row) != basis.ncols:
        raise ContractError(f"target has length {len(target_row)}, basis has {basis.ncols} columns")
    sol = dependency_rows(basis.entries, target_row, basis.field.p)
    if sol is None:
        return None
    lam = tuple(sorted(sol))
    return DependencySolution(lam, tuple(sol[j] for j in lam))


def check_forward(sol: DependencySolution | dict[int, int], basis_col_at_y: Sequence[int], t_xy: int, p: int) -> bool:
    """True iff appending the new row/column would raise the rank by one.

    ``basis_col_at_y[i]`` is the entry of the i-th Lambda row (in ``sol`` order)
    in the new column.  Costs O(|Lambda|).
    """
    coeffs = sol.coeffs if isinstance(sol, DependencySolution) else tuple(sol.values())
    if len(coeffs) != len(basis_col_at_y):
        raise ContractError("column slice does not match lambda size")
    acc = 0
    for a, t in zip(coeffs, basis_col_at_y):
        acc += a * t
    return (t_xy - acc) % p != 0


def removable_rows(rows: Sequence[Sequence[int]], y_col: int, p: int) -> list[int]:
    """All rows x whose deletion together with ``y_col`` leaves a nonsingular minor.

    Minor (x, y) is nonsingular iff the cofactor is nonzero iff entry (y, x) of
    the inverse is nonzero, so one solve of ``M^T z = e_y`` gives every answer.
    """
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ContractError("matrix must be square and non-empty")
    if not 0 <= y_col < n:
        raise ContractError(f"column {y_col} out of range")
    mt = [[rows[i][j] for i in range(n)] for j in range(n)]
    e = [int(j == y_col) for j in range(n)]
    try:
        z = solve_linear(mt, e, p)
    except ContractError:
        raise ContractError("matrix is singular") from None
    return [x for x in range(n) if z[x]]


def find_removable_input(m: FMatrix, y_col: int) -> int:
    """Smallest row x such that deleting row x and column ``y_col`` keeps full rank."""
    if m.nrows != m.ncols:
        raise ContractError("matrix must be square")
    xs = removable_rows(m.entries, y_col, m.field.p)
    if not xs:
        raise ContractError("no removable row; matrix is not full rank")
    return xs[0]
