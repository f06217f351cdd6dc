"""Dense exact linear algebra over Q(sqrt2).

Matrices are tuples of row tuples of :class:`~hktlie.scalar.Scalar`; vectors
are tuples.  A matrix acts on column vectors, so column ``j`` of an
endomorphism is the image of the ``j``-th basis vector.

Elimination is done on sparse rows (``dict`` column -> Scalar) with an
incremental reduced-row-echelon form; the systems built by the geometry
layer are extremely sparse, which is what keeps 8- and 16-dimensional
problems fast in pure Python.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "DimensionError",
    "Matrix",
    "Vector",
    "matrix",
    "zeros",
    "identity",
    "diag",
    "block",
    "matmul",
    "matvec",
    "madd",
    "msub",
    "mscale",
    "transpose",
    "commutator",
    "is_zero",
    "trace",
    "vec_add",
    "vec_scale",
    "dot",
    "RowReducer",
    "LinearSolution",
    "linear_solve",
    "rank",
    "nullspace",
    "leading_principal_minors",
    "inverse",
    "SpanBasis",
    "span_closure",
]

Matrix = tuple  # tuple[tuple[Scalar, ...], ...]
Vector = tuple  # tuple[Scalar, ...]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def matrix(rows: Iterable[Iterable]) -> Matrix:
    """Build a matrix, coercing entries (ints, Fractions, literals) to Scalar."""
    out = tuple(tuple(as_scalar(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise DimensionError("ragged matrix")
    return out


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    row = (ZERO,) * m
    return (row,) * n


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def diag(*blocks: Matrix) -> Matrix:
    """Block-diagonal matrix from square blocks."""
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        k = len(b)
        for r in b:
            rows.append((ZERO,) * offset + tuple(r) + (ZERO,) * (n - offset - k))
        offset += k
    return tuple(rows)


def block(grid: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a matrix from a grid of blocks of compatible sizes."""
    rows = []
    for brow in grid:
        height = len(brow[0])
        for r in range(height):
            rows.append(tuple(x for b in brow for x in b[r]))
    return tuple(rows)


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k = shape(a)
    k2, m = shape(b)
    if k != k2:
        raise DimensionError(f"cannot multiply {n}x{k} by {k2}x{m}")
    out = []
    for row in a:
        acc = [ZERO] * m
        for t, x in enumerate(row):
            if not x:
                continue
            brow = b[t]
            for j in range(m):
                y = brow[j]
                if y:
                    acc[j] = acc[j] + x * y
        out.append(tuple(acc))
    return tuple(out)


def matvec(a: Matrix, v: Sequence[Scalar]) -> Vector:
    if a and len(a[0]) != len(v):
        raise DimensionError(f"cannot apply {len(a)}x{len(a[0])} matrix to length-{len(v)} vector")
    nz = [(j, x) for j, x in enumerate(v) if x]
    out = []
    for row in a:
        acc = ZERO
        for j, x in nz:
            y = row[j]
            if y:
                acc = acc + y * x
        out.append(acc)
    return tuple(out)


def madd(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionError("shape mismatch in addition")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def msub(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionError("shape mismatch in subtraction")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mscale(s, a: Matrix) -> Matrix:
    s = as_scalar(s)
    if not s:
        return zeros(*shape(a))
    return tuple(tuple(s * x if x else ZERO for x in r) for r in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return msub(matmul(a, b), matmul(b, a))


def is_zero(a) -> bool:
    """True for an all-zero matrix or vector."""
    if a and isinstance(a[0], tuple):
        return not any(x for r in a for x in r)
    return not any(a)


def trace(a: Matrix) -> Scalar:
    acc = ZERO
    for i, r in enumerate(a):
        acc = acc + r[i]
    return acc


def vec_add(u, v) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_scale(s, v) -> Vector:
    s = as_scalar(s)
    return tuple(s * x for x in v)


def dot(u, v) -> Scalar:
    acc = ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


# -- sparse reduced row echelon form ------------------------------------------


class RowReducer:
    """Incremental reduced row echelon form over Q(sqrt2).

    Rows are sparse dicts ``column -> Scalar``.  Each accepted row is fully
    reduced against the current pivots and then eliminated from the other
    pivot rows, so the stored system is always in RREF.  An optional
    right-hand side lives in the pseudo-column ``ncols``.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, Scalar]] = {}
        self._occurs: dict[int, set[int]] = {}
        self.inconsistent = False

    def _reduce(self, row: dict[int, Scalar]) -> dict[int, Scalar]:
        row = {c: v for c, v in row.items() if v}
        for c in [c for c in row if c in self.pivots]:
            coef = row.get(c)
            if not coef:
                continue
            for k, v in self.pivots[c].items():
                nv = row.get(k, ZERO) - coef * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict[int, Scalar]) -> bool:
        """Insert a row; return True if it raised the rank."""
        row = self._reduce(row)
        cols = [c for c in row if c != self.ncols]
        if not cols:
            if row.get(self.ncols):
                self.inconsistent = True
            return False
        p = min(cols)
        inv = row[p].inverse()
        row = {k: v * inv for k, v in row.items()}
        # eliminate the new pivot column from the existing pivot rows
        for q in list(self._occurs.get(p, ())):
            prow = self.pivots[q]
            coef = prow.get(p)
            if not coef:
                continue
            for k, v in row.items():
                nv = prow.get(k, ZERO) - coef * v
                if nv:
                    if k not in prow:
                        self._occurs.setdefault(k, set()).add(q)
                    prow[k] = nv
                elif k in prow:
                    del prow[k]
                    self._occurs[k].discard(q)
        self._occurs.pop(p, None)
        self.pivots[p] = row
        for k in row:
            if k != p:
                self._occurs.setdefault(k, set()).add(p)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def particular(self) -> Vector | None:
        if self.inconsistent:
            return None
        x = [ZERO] * self.ncols
        for p, row in self.pivots.items():
            x[p] = row.get(self.ncols, ZERO)
        return tuple(x)

    def kernel(self) -> list[Vector]:
        basis = []
        for f in self.free_columns():
            x = [ZERO] * self.ncols
            x[f] = ONE
            for p, row in self.pivots.items():
                v = row.get(f)
                if v:
                    x[p] = -v
            basis.append(tuple(x))
        return basis


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set ``particular + span(kernel)``; empty when inconsistent."""

    particular: Vector | None
    kernel: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def unique(self) -> bool:
        return self.consistent and not self.kernel


def _sparse_rows(a: Matrix) -> list[dict[int, Scalar]]:
    return [{j: x for j, x in enumerate(r) if x} for r in a]


def linear_solve(a: Matrix, b: Sequence | None = None) -> LinearSolution:
    """Solve ``a x = b`` exactly and describe the full solution set.

    >>> linear_solve(identity(2), [3, 4]).particular
    (Scalar('3'), Scalar('4'))
    """
    n, m = shape(a)
    if b is None:
        b = (ZERO,) * n
    if len(b) != n:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {n}")
    if isinstance(b[0] if b else None, tuple):
        b = [r[0] for r in b]  # accept a column matrix
    rr = RowReducer(m)
    for row, rhs in zip(_sparse_rows(a), b):
        rhs = as_scalar(rhs)
        if rhs:
            row[m] = rhs
        rr.add(row)
    return LinearSolution(rr.particular(), rr.kernel() if not rr.inconsistent else [])


def rank(a: Matrix) -> int:
    rr = RowReducer(shape(a)[1])
    for row in _sparse_rows(a):
        rr.add(row)
    return rr.rank


def nullspace(a: Matrix) -> list[Vector]:
    return linear_solve(a).kernel


def leading_principal_minors(a: Matrix) -> list[Scalar]:
    """Leading principal minors, via elimination without row exchanges.

    When a pivot vanishes the remaining minors are computed by cofactor-free
    fallback (exact determinant of the leading block).
    """
    n = len(a)
    work = [list(r) for r in a]
    minors = []
    det = ONE
    for k in range(n):
        piv = work[k][k]
        if not piv:
            # rare: fall back to direct determinants for the rest
            minors.extend(_det([r[: j + 1] for r in a[: j + 1]]) for j in range(k, n))
            return minors
        det = det * piv
        minors.append(det)
        inv = piv.inverse()
        for i in range(k + 1, n):
            f = work[i][k]
            if f:
                f = f * inv
                for j in range(k, n):
                    if work[k][j]:
                        work[i][j] = work[i][j] - f * work[k][j]
    return minors


def _det(a) -> Scalar:
    n = len(a)
    work = [list(r) for r in a]
    det = ONE
    for k in range(n):
        p = next((i for i in range(k, n) if work[i][k]), None)
        if p is None:
            return ZERO
        if p != k:
            work[k], work[p] = work[p], work[k]
            det = -det
        piv = work[k][k]
        det = det * piv
        inv = piv.inverse()
        for i in range(k + 1, n):
            f = work[i][k]
            if f:
                f = f * inv
                for j in range(k, n):
                    work[i][j] = work[i][j] - f * work[k][j]
    return det


def inverse(a: Matrix) -> Matrix:
    n, m = shape(a)
    if n != m:
        raise DimensionError("only square matrices are invertible")
    cols = []
    for j in range(n):
        e = tuple(ONE if i == j else ZERO for i in range(n))
        sol = linear_solve(a, e)
        if not sol.unique:
            raise ZeroDivisionError("matrix is singular")
        cols.append(sol.particular)
    return transpose(tuple(cols))


# -- spans of matrices ---------------------------------------------------------


def _flatten(a: Matrix) -> dict[int, Scalar]:
    m = len(a[0]) if a else 0
    return {i * m + j: x for i, r in enumerate(a) for j, x in enumerate(r) if x}


class SpanBasis:
    """Exact subspace of ``n x m`` matrices maintained in RREF."""

    def __init__(self, n: int, m: int | None = None):
        self.n = n
        self.m = n if m is None else m
        self._rr = RowReducer(self.n * self.m)

    def add(self, a: Matrix) -> bool:
        if shape(a) != (self.n, self.m):
            raise DimensionError(f"expected {self.n}x{self.m} matrix, got {shape(a)[0]}x{shape(a)[1]}")
        return self._rr.add(_flatten(a))

    def contains(self, a: Matrix) -> bool:
        return not self._rr._reduce(_flatten(a))

    def __len__(self) -> int:
        return self._rr.rank

    def basis(self) -> list[Matrix]:
        """Canonical (reduced) basis, ordered by pivot position."""
        out = []
        for p in sorted(self._rr.pivots):
            flat = self._rr.pivots[p]
            out.append(
                tuple(
                    tuple(flat.get(i * self.m + j, ZERO) for j in range(self.m))
                    for i in range(self.n)
                )
            )
        return out


def span_closure(
    generators: Sequence[Matrix],
    bracket: Callable[[Matrix, Matrix], Matrix] | None = commutator,
    operators: Sequence[Callable[[Matrix], Matrix]] = (),
    n: int | None = None,
) -> list[Matrix]:
    """Smallest subspace containing ``generators`` closed under ``bracket``
    (a bilinear rule) and under each linear map in ``operators``.

    Returns the canonical reduced basis; an empty generator list gives ``[]``.
    """
    if not generators:
        return []
    n = len(generators[0]) if n is None else n
    span = SpanBasis(n)
    members: list[Matrix] = []
    queue: list[Matrix] = []
    for g in generators:
        if span.add(g):
            members.append(g)
            queue.append(g)
    cap = n * n
    while queue:
        a = queue.pop()
        new = [op(a) for op in operators]
        if bracket is not None:
            new.extend(bracket(a, b) for b in members)
        for x in new:
            if span.add(x):
                members.append(x)
                queue.append(x)
                if len(span) > cap:  # pragma: no cover - impossible by dimension
                    raise RuntimeError("span exceeded ambient dimension")
    return span.basis()
