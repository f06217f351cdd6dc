"""Metrics, (hyper)complex structures and connections on Lie algebras.

A connection is a tuple of ``dim`` matrices, entry ``i`` being ``nabla_{e_i}``
(left-invariant connections are linear in the direction).  All quantities
are exact; every computed connection is re-checked against its defining
properties before it is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .errors import (
    InternalConsistencyError,
    ObataError,
    PreconditionError,
    TorsionNotSkewError,
)
from .lie import KForm, LieAlgebra, ce_differential, jacobi_defect
from .linalg import Matrix, RowReducer
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Metric",
    "GeomStructure",
    "Check",
    "connection",
    "zero_connection",
    "along",
    "column",
    "kaehler_form",
    "nijenhuis",
    "is_integrable",
    "check_hypercomplex",
    "is_abelian_hypercomplex",
    "levi_civita",
    "bismut",
    "obata",
    "obata_closed_form",
    "torsion",
    "torsion_3form",
    "curvature",
    "is_flat",
    "parallel_defects",
    "HKTVerdict",
    "hkt_check",
    "sigma_form",
    "lee_form",
    "form_inner",
    "codifferential",
    "infinitesimal_holonomy",
    "check_sp_homomorphism",
    "validate",
]


# -- basic data ---------------------------------------------------------------


class Metric:
    """Positive-definite inner product given by its Gram matrix."""

    __slots__ = ("gram", "_inv")

    def __init__(self, gram):
        gram = la.matrix(gram)
        n = len(gram)
        if any(len(r) != n for r in gram):
            raise PreconditionError("Gram matrix must be square")
        for i, j in itertools.combinations(range(n), 2):
            if gram[i][j] != gram[j][i]:
                raise PreconditionError(f"Gram matrix not symmetric at ({i + 1}, {j + 1})", (i, j))
        for k, m in enumerate(la.leading_principal_minors(gram)):
            if m.sign() <= 0:
                raise PreconditionError(f"metric not positive-definite: leading minor {k + 1} is {m}", (k,))
        self.gram = gram
        self._inv = None

    @classmethod
    def identity(cls, n: int) -> "Metric":
        return cls(la.identity(n))

    @classmethod
    def diagonal(cls, entries) -> "Metric":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def inverse(self) -> Matrix:
        if self._inv is None:
            self._inv = la.inverse(self.gram)
        return self._inv

    def inner(self, x, y) -> Scalar:
        return la.dot(x, la.matvec(self.gram, y))

    def lower(self, x) -> tuple:
        return la.matvec(self.gram, x)

    def raise_(self, xi) -> tuple:
        return la.matvec(self.inverse, xi)

    def is_diagonal(self) -> bool:
        return all(not self.gram[i][j] for i in range(self.dim) for j in range(self.dim) if i != j)

    def direct_sum(self, other: "Metric") -> "Metric":
        return Metric(la.diag(self.gram, other.gram))

    def __eq__(self, other):
        return isinstance(other, Metric) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"Metric(dim={self.dim})"


@dataclass(frozen=True)
class GeomStructure:
    """A Lie algebra with an optional metric and one or three complex structures."""

    algebra: LieAlgebra
    metric: Metric | None = None
    complex: tuple = ()

    def __post_init__(self):
        n = self.algebra.dim
        if self.metric is not None and self.metric.dim != n:
            raise PreconditionError(f"metric has dim {self.metric.dim}, algebra has dim {n}")
        cx = tuple(la.matrix(j) for j in self.complex)
        if len(cx) not in (0, 1, 3):
            raise PreconditionError("expected zero, one or three complex structures")
        for j in cx:
            if la.shape(j) != (n, n):
                raise PreconditionError("complex structure has wrong size")
        object.__setattr__(self, "complex", cx)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def is_triple(self) -> bool:
        return len(self.complex) == 3

    def J(self, alpha: int = 1) -> Matrix:
        if not self.complex:
            raise PreconditionError("structure carries no complex structure")
        return self.complex[alpha - 1]

    def require_metric(self) -> Metric:
        if self.metric is None:
            raise PreconditionError("operation needs a metric")
        return self.metric


@dataclass(frozen=True)
class Check:
    """Outcome of one structural test; ``witness`` uses 0-based indices."""

    name: str
    ok: bool
    detail: str = ""
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def connection(mats) -> tuple:
    return tuple(la.matrix(m) for m in mats)


def zero_connection(n: int) -> tuple:
    return (la.zeros(n),) * n


def along(C, x) -> Matrix:
    """``nabla_X`` for a coordinate vector ``X``."""
    n = len(C)
    acc = la.zeros(n)
    for i, a in enumerate(x):
        if a:
            acc = la.madd(acc, la.mscale(a, C[i]))
    return acc


def column(a: Matrix, j: int) -> tuple:
    return tuple(r[j] for r in a)


def _basis(n: int, i: int) -> tuple:
    return tuple(ONE if k == i else ZERO for k in range(n))


def _require_algebra(g: LieAlgebra):
    defect, wit = jacobi_defect(g)
    if defect:
        raise PreconditionError(f"Jacobi identity fails on {tuple(w + 1 for w in wit)}", wit)


def _require_complex(J: Matrix, n: int):
    if la.shape(J) != (n, n):
        raise PreconditionError("endomorphism has wrong size")
    if la.madd(la.matmul(J, J), la.identity(n)) != la.zeros(n):
        raise PreconditionError("J^2 != -id")


def kaehler_form(J: Matrix, metric: Metric) -> KForm:
    """``omega(X, Y) = g(J X, Y)``."""
    n = metric.dim
    jg = la.matmul(la.transpose(J), metric.gram)
    return KForm(2, n, {(i, j): jg[i][j] for i, j in itertools.combinations(range(n), 2)})


# -- integrability --------------------------------------------------------------


def nijenhuis(J: Matrix, g: LieAlgebra) -> dict[tuple[int, int], tuple]:
    """Table ``N(e_i, e_j)`` for ``i < j`` of
    ``N(X,Y) = J([X,Y] - [JX,JY]) - ([JX,Y] + [X,JY])``."""
    n = g.dim
    _require_complex(J, n)
    cols = [column(J, i) for i in range(n)]
    es = [_basis(n, i) for i in range(n)]
    table = {}
    for i, j in itertools.combinations(range(n), 2):
        inner = la.vec_add(g.bracket(es[i], es[j]), la.vec_scale(-1, g.bracket(cols[i], cols[j])))
        outer = la.vec_add(g.bracket(cols[i], es[j]), g.bracket(es[i], cols[j]))
        table[(i, j)] = la.vec_add(la.matvec(J, inner), la.vec_scale(-1, outer))
    return table


def is_integrable(J: Matrix, g: LieAlgebra) -> tuple[bool, tuple[int, int] | None]:
    for key, v in nijenhuis(J, g).items():
        if any(v):
            return False, key
    return True, None


def check_hypercomplex(J1: Matrix, J2: Matrix, J3: Matrix, g: LieAlgebra) -> Check:
    """Quaternion relations plus integrability of each ``J_alpha``."""
    n = g.dim
    ident = la.identity(n)
    minus = la.mscale(-1, ident)
    for a, J in enumerate((J1, J2, J3), 1):
        if la.shape(J) != (n, n):
            return Check("hypercomplex", False, f"J{a} has wrong size")
        sq = la.matmul(J, J)
        if sq != minus:
            bad = next((i, j) for i in range(n) for j in range(n) if sq[i][j] != minus[i][j])
            return Check("hypercomplex", False, f"J{a}^2 != -id", bad)
    j12, j21 = la.matmul(J1, J2), la.matmul(J2, J1)
    if j12 != J3:
        bad = next((i, j) for i in range(n) for j in range(n) if j12[i][j] != J3[i][j])
        return Check("hypercomplex", False, "J1 J2 != J3", bad)
    if j21 != la.mscale(-1, J3):
        bad = next((i, j) for i in range(n) for j in range(n) if j21[i][j] != -J3[i][j])
        return Check("hypercomplex", False, "J2 J1 != -J3", bad)
    for a, J in enumerate((J1, J2, J3), 1):
        ok, wit = is_integrable(J, g)
        if not ok:
            return Check("hypercomplex", False, f"Nijenhuis tensor of J{a} is nonzero on e{wit[0] + 1}, e{wit[1] + 1}", wit)
    return Check("hypercomplex", True)


def is_abelian_hypercomplex(J1, J2, J3, g: LieAlgebra) -> tuple[bool, tuple | None]:
    """``[J X, J Y] = [X, Y]`` for all basis pairs and all three ``J``.

    The witness is ``(alpha, i, j)`` with 1-based ``alpha``.
    """
    n = g.dim
    es = [_basis(n, i) for i in range(n)]
    for a, J in enumerate((J1, J2, J3), 1):
        cols = [column(J, i) for i in range(n)]
        for i, j in itertools.combinations(range(n), 2):
            if g.bracket(cols[i], cols[j]) != g.bracket(es[i], es[j]):
                return False, (a, i, j)
    return True, None


# -- connections -----------------------------------------------------------------


def _lowered_brackets(g: LieAlgebra, metric: Metric, J: Matrix | None = None):
    """``B[i][j][k] = g([J e_i, J e_j], e_k)`` (``J = id`` when omitted)."""
    n = g.dim
    vecs = [column(J, i) for i in range(n)] if J is not None else [_basis(n, i) for i in range(n)]
    out = [[None] * n for _ in range(n)]
    zero = (ZERO,) * n
    for i in range(n):
        out[i][i] = zero
        for j in range(i + 1, n):
            v = metric.lower(g.bracket(vecs[i], vecs[j]))
            out[i][j] = v
            out[j][i] = tuple(-x for x in v)
    return out


def _raise_connection(lowered, metric: Metric) -> tuple:
    """From ``L[i][j][k] = g(nabla_{e_i} e_j, e_k)`` to connection matrices."""
    n = metric.dim
    inv = metric.inverse
    mats = []
    for i in range(n):
        cols = [la.matvec(inv, lowered[i][j]) for j in range(n)]
        mats.append(la.transpose(tuple(cols)))
    return tuple(mats)


def levi_civita(s: GeomStructure) -> tuple:
    """Levi-Civita connection from the Koszul formula
    ``2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)``."""
    metric = s.require_metric()
    g = s.algebra
    n = g.dim
    B = _lowered_brackets(g, metric)
    half = Scalar(1, 0) / 2
    L = [[tuple(half * (B[i][j][k] - B[j][k][i] + B[k][i][j]) for k in range(n)) for j in range(n)] for i in range(n)]
    C = _raise_connection(L, metric)
    tors = torsion(C, g)
    if any(any(v) for v in tors.values()):
        raise InternalConsistencyError("Levi-Civita connection has torsion")
    if not _is_metric(C, metric):
        raise InternalConsistencyError("Levi-Civita connection is not metric")
    return C


def _is_metric(C, metric: Metric) -> bool:
    G = metric.gram
    for M in C:
        if la.madd(la.matmul(la.transpose(M), G), la.matmul(G, M)) != la.zeros(len(G)):
            return False
    return True


def parallel_defects(C, metric: Metric | None = None, Js: Sequence[Matrix] = ()) -> list[str]:
    """Names of the tensors (``g``, ``J1``...) that ``C`` fails to parallelise."""
    bad = []
    if metric is not None and not _is_metric(C, metric):
        bad.append("g")
    for a, J in enumerate(Js, 1):
        if any(la.commutator(M, J) != la.zeros(len(J)) for M in C):
            bad.append(f"J{a}")
    return bad


def _require_hermitian(s: GeomStructure, alpha: int):
    metric = s.require_metric()
    J = s.J(alpha)
    _require_complex(J, s.dim)
    G = metric.gram
    if la.matmul(la.matmul(la.transpose(J), G), J) != G:
        raise PreconditionError(f"metric is not compatible with J{alpha}")
    ok, wit = is_integrable(J, s.algebra)
    if not ok:
        raise PreconditionError(f"J{alpha} is not integrable", wit)


def bismut(s: GeomStructure, alpha: int = 1) -> tuple:
    """Bismut connection of the Hermitian pair ``(J_alpha, g)``.

    The result is checked to preserve ``g`` and ``J_alpha`` and to have
    totally skew lowered torsion.
    """
    _require_hermitian(s, alpha)
    metric = s.metric
    g = s.algebra
    n = g.dim
    J = s.J(alpha)
    B = _lowered_brackets(g, metric)
    BJ = _lowered_brackets(g, metric, J)
    half = Scalar(1, 0) / 2
    L = [
        [
            tuple(
                half * (B[i][j][k] - BJ[i][j][k] - B[j][k][i] - BJ[j][k][i] + B[k][i][j] - BJ[k][i][j])
                for k in range(n)
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    C = _raise_connection(L, metric)
    bad = parallel_defects(C, metric, [J])
    if bad:
        raise InternalConsistencyError(f"Bismut connection does not preserve {', '.join(bad)}")
    try:
        torsion_3form(C, s)
    except TorsionNotSkewError as exc:
        raise InternalConsistencyError("Bismut torsion is not a 3-form", exc.witness) from exc
    return C


def centralizer(mats: Sequence[Matrix], n: int) -> list[Matrix]:
    """Basis of ``{A : A M = M A for every M in mats}``."""
    rr = RowReducer(n * n)
    for M in mats:
        for r in range(n):
            for c in range(n):
                # (A M - M A)[r][c] = sum_m A[r][m] M[m][c] - M[r][m] A[m][c]
                row: dict[int, Scalar] = {}
                for m in range(n):
                    x = M[m][c]
                    if x:
                        row[r * n + m] = row.get(r * n + m, ZERO) + x
                    y = M[r][m]
                    if y:
                        row[m * n + c] = row.get(m * n + c, ZERO) - y
                rr.add(row)
    out = []
    for v in rr.kernel():
        out.append(tuple(tuple(v[r * n + c] for c in range(n)) for r in range(n)))
    return out


def obata(J1: Matrix, J2: Matrix, J3: Matrix, g: LieAlgebra) -> tuple:
    """Obata connection: the unique torsion-free connection with
    ``nabla J_alpha = 0``, found by exact linear solve.

    Each ``nabla_{e_i}`` is expanded in a basis of the commutant of the
    triple, which encodes ``nabla J_alpha = 0``; torsion-freeness
    ``nabla_{e_i} e_j - nabla_{e_j} e_i = [e_i, e_j]`` is then solved for
    the coefficients.  Raises :class:`ObataError` unless the solution
    exists and is unique.
    """
    n = g.dim
    chk = check_hypercomplex(J1, J2, J3, g)
    if not chk.ok:
        raise PreconditionError(f"not a hypercomplex structure: {chk.detail}", chk.witness)
    comm = centralizer([J1, J2, J3], n)
    m = len(comm)
    # unknown x[i*m + b] is the coefficient of comm[b] in nabla_{e_i}
    rr = RowReducer(n * m)
    for i, j in itertools.combinations(range(n), 2):
        target = g.basis_bracket(i, j)
        for r in range(n):
            row: dict[int, Scalar] = {}
            for b, A in enumerate(comm):
                x = A[r][j]
                if x:
                    row[i * m + b] = row.get(i * m + b, ZERO) + x
                y = A[r][i]
                if y:
                    row[j * m + b] = row.get(j * m + b, ZERO) - y
            rhs = target.get(r)
            if rhs:
                row[n * m] = rhs
            rr.add(row)
    if rr.inconsistent:
        raise ObataError("no torsion-free connection parallelises the triple")
    free = rr.free_columns()
    if free:
        raise ObataError(f"Obata system is underdetermined ({len(free)} free parameters)")
    x = rr.particular()
    C = []
    for i in range(n):
        acc = la.zeros(n)
        for b, A in enumerate(comm):
            if x[i * m + b]:
                acc = la.madd(acc, la.mscale(x[i * m + b], A))
        C.append(acc)
    C = tuple(C)
    if any(any(v) for v in torsion(C, g).values()) or parallel_defects(C, None, [J1, J2, J3]):
        raise InternalConsistencyError("Obata solution fails its defining equations")
    return C


def obata_closed_form(J1: Matrix, J2: Matrix, J3: Matrix, g: LieAlgebra) -> tuple:
    """Closed formula for the Obata connection on a Lie algebra,
    ``nabla_X Y = 1/2([X,Y] + J1[J1 X, Y] - J2[X, J2 Y] + J3[J1 X, J2 Y])``.

    Independent of :func:`obata`; used to cross-check it.
    """
    n = g.dim
    half = Scalar(1, 0) / 2
    es = [_basis(n, i) for i in range(n)]
    mats = []
    for i in range(n):
        x, j1x = es[i], column(J1, i)
        cols = []
        for j in range(n):
            y, j2y = es[j], column(J2, j)
            v = g.bracket(x, y)
            v = la.vec_add(v, la.matvec(J1, g.bracket(j1x, y)))
            v = la.vec_add(v, la.vec_scale(-1, la.matvec(J2, g.bracket(x, j2y))))
            v = la.vec_add(v, la.matvec(J3, g.bracket(j1x, j2y)))
            cols.append(la.vec_scale(half, v))
        mats.append(la.transpose(tuple(cols)))
    return tuple(mats)


def torsion(C, g: LieAlgebra) -> dict[tuple[int, int], tuple]:
    """``T(e_i, e_j) = nabla_i e_j - nabla_j e_i - [e_i, e_j]`` for ``i < j``."""
    n = g.dim
    out = {}
    for i, j in itertools.combinations(range(n), 2):
        br = g.basis_bracket(i, j)
        out[(i, j)] = tuple(C[i][r][j] - C[j][r][i] - br.get(r, ZERO) for r in range(n))
    return out


def torsion_3form(C, s: GeomStructure) -> KForm:
    """Torsion 3-form ``c(X, Y, Z) = -g(X, T(Y, Z))``; raises if not totally skew.

    The overall sign is chosen so that ``c = -sigma`` where
    ``sigma(X, Y, Z) = d omega(J X, J Y, J Z)``, i.e. ``c = -J d omega`` with
    ``J`` acting on 3-forms by ``(J b)(X, Y, Z) = b(J X, J Y, J Z)``.  With
    this normalisation the Bismut torsion of the doubled R+e(2) example is
    ``2 e^{256}``.  :func:`torsion` itself keeps the usual sign.
    """
    metric = s.require_metric()
    n = s.dim
    T = torsion(C, s.algebra)
    low = {}
    for (j, k), v in T.items():
        low[(j, k)] = tuple(-x for x in metric.lower(v))
    # c(e_i, e_j, e_k) = low[(j,k)][i]; it is skew in (j,k) by construction,
    # so total skewness reduces to c(e_i, e_j, e_k) = -c(e_j, e_i, e_k)
    def c(i, j, k):
        if j == k:
            return ZERO
        return low[(j, k)][i] if j < k else -low[(k, j)][i]

    for i, j, k in itertools.product(range(n), repeat=3):
        if i <= j and c(i, j, k) != -c(j, i, k):
            raise TorsionNotSkewError(f"torsion is not a 3-form at (e{i + 1}, e{j + 1}, e{k + 1})", (i, j, k))
    return KForm(3, n, {(i, j, k): c(i, j, k) for i, j, k in itertools.combinations(range(n), 3)})


def curvature(C, g: LieAlgebra) -> dict[tuple[int, int], Matrix]:
    """``R(e_i, e_j) = [nabla_i, nabla_j] - nabla_{[e_i, e_j]}`` for ``i < j``."""
    n = g.dim
    out = {}
    for i, j in itertools.combinations(range(n), 2):
        R = la.commutator(C[i], C[j])
        for k, c in g.basis_bracket(i, j).items():
            R = la.msub(R, la.mscale(c, C[k]))
        out[(i, j)] = R
    return out


def is_flat(C, g: LieAlgebra) -> bool:
    return all(la.is_zero(R) for R in curvature(C, g).values())


# -- HKT --------------------------------------------------------------------------


def sigma_form(s: GeomStructure, alpha: int) -> KForm:
    """``sigma_alpha(X, Y, Z) = d omega_alpha(J_alpha X, J_alpha Y, J_alpha Z)``."""
    metric = s.require_metric()
    J = s.J(alpha)
    d_omega = ce_differential(kaehler_form(J, metric), s.algebra)
    return d_omega.pullback(J)


@dataclass(frozen=True)
class HKTVerdict:
    """Result of :func:`hkt_check`: both certificates and a witness."""

    hkt: bool
    route_a: bool
    route_b: bool
    witness: tuple | None = None
    sigma: tuple = field(default=(), repr=False)

    def __bool__(self):
        return self.hkt


def _route_a(s: GeomStructure) -> tuple[bool, tuple | None]:
    """Cyclic bracket identity on all ordered basis triples, alpha vs beta
    for (1, 2) and (2, 3)."""
    g, metric = s.algebra, s.metric
    n = g.dim
    H = []
    for a in (1, 2, 3):
        BJ = _lowered_brackets(g, metric, s.J(a))
        H.append(BJ)
    for a, b in ((0, 1), (1, 2)):
        A, B = H[a], H[b]
        for i, j, k in itertools.product(range(n), repeat=3):
            lhs = A[i][j][k] + A[j][k][i] + A[k][i][j]
            rhs = B[i][j][k] + B[j][k][i] + B[k][i][j]
            if lhs != rhs:
                return False, (a + 1, b + 1, i, j, k)
    return True, None


def hkt_check(s: GeomStructure) -> HKTVerdict:
    """Decide HKT for a hyper-Hermitian structure by two routes.

    Route A evaluates the cyclic bracket identity directly; route B compares
    the three forms ``sigma_alpha``.  Disagreement raises
    :class:`InternalConsistencyError`.
    """
    if not s.is_triple:
        raise PreconditionError("HKT needs three complex structures")
    metric = s.require_metric()
    chk = check_hypercomplex(*s.complex, s.algebra)
    if not chk.ok:
        raise PreconditionError(f"not hypercomplex: {chk.detail}", chk.witness)
    for a in (1, 2, 3):
        J = s.J(a)
        if la.matmul(la.matmul(la.transpose(J), metric.gram), J) != metric.gram:
            raise PreconditionError(f"metric not compatible with J{a}")
    a_ok, a_wit = _route_a(s)
    sig = tuple(sigma_form(s, a) for a in (1, 2, 3))
    b_ok = sig[0] == sig[1] == sig[2]
    if a_ok != b_ok:
        raise InternalConsistencyError(f"HKT routes disagree (cyclic identity: {a_ok}, sigma forms: {b_ok})", a_wit)
    return HKTVerdict(a_ok, a_ok, b_ok, a_wit, sig)


def _skew3(c: KForm):
    """Iterate ``((i, j, k), value)`` over all index orders of a 3-form."""
    for (p, q, r), x in c.coeffs.items():
        yield (p, q, r), x
        yield (q, r, p), x
        yield (r, p, q), x
        yield (q, p, r), -x
        yield (p, r, q), -x
        yield (r, q, p), -x


def lee_form(s: GeomStructure, c: KForm, alpha: int = 1) -> KForm:
    """Lee form ``theta(v) = -1/2 sum_{i,j} g^{ij} c(J v, e_i, J e_j)``.

    The inverse Gram matrix replaces an orthonormal frame, so no square
    roots are introduced.
    """
    metric = s.require_metric()
    n = s.dim
    J = s.J(alpha)
    K = la.matmul(metric.inverse, la.transpose(J))  # K[i][b] = sum_j g^{ij} J[b][j]
    t = [ZERO] * n
    for (a, i, b), x in _skew3(c):
        k = K[i][b]
        if k:
            t[a] = t[a] + x * k
    half = Scalar(-1, 0) / 2
    theta = [half * la.dot(column(J, m), t) for m in range(n)]
    return KForm.from_vector(theta)


# -- codifferential ---------------------------------------------------------------


def _minor(a: Matrix, rows: tuple, cols: tuple) -> Scalar:
    sub = [[a[r][c] for c in cols] for r in rows]
    return la._det(sub)


def form_inner(alpha: KForm, beta: KForm, metric: Metric) -> Scalar:
    """Inner product on forms induced by ``g``:
    ``<e^I, e^J> = det(g^{-1}[I, J])``."""
    if alpha.degree != beta.degree:
        raise ValueError("forms of different degree")
    inv = metric.inverse
    diagonal = metric.is_diagonal()
    acc = ZERO
    for I, x in alpha.coeffs.items():
        for K, y in beta.coeffs.items():
            if diagonal:
                if I != K:
                    continue
                m = ONE
                for i in I:
                    m = m * inv[i][i]
            else:
                m = _minor(inv, I, K)
            if m:
                acc = acc + x * y * m
    return acc


def codifferential(beta: KForm, s: GeomStructure) -> KForm:
    """Metric adjoint of the Chevalley-Eilenberg differential:
    ``<d* beta, a> = <beta, d a>`` for every form ``a`` of degree ``k - 1``."""
    metric = s.require_metric()
    g = s.algebra
    n = g.dim
    k = beta.degree
    if k == 0:
        return KForm.zero(0, n)
    monos = list(itertools.combinations(range(n), k - 1))
    rhs = []
    for I in monos:
        dI = ce_differential(KForm._raw(k - 1, n, {I: ONE}), g)
        rhs.append(form_inner(beta, dI, metric))
    if not any(rhs):
        return KForm.zero(k - 1, n)
    if metric.is_diagonal():
        inv = metric.inverse
        coeffs = {}
        for I, v in zip(monos, rhs):
            if v:
                m = ONE
                for i in I:
                    m = m * inv[i][i]
                coeffs[I] = v / m
        return KForm._raw(k - 1, n, coeffs)
    gram = tuple(tuple(form_inner(KForm._raw(k - 1, n, {I: ONE}), KForm._raw(k - 1, n, {K: ONE}), metric) for K in monos) for I in monos)
    sol = la.linear_solve(gram, rhs)
    return KForm._raw(k - 1, n, {I: x for I, x in zip(monos, sol.particular)})


# -- holonomy and representations ---------------------------------------------------


def infinitesimal_holonomy(C, g: LieAlgebra) -> list[Matrix]:
    """Span of the curvature operators closed under ``[nabla_{e_k}, .]`` and
    commutators.  Stabilises within ``dim**2`` steps by dimension count."""
    n = g.dim
    seeds = [R for R in curvature(C, g).values() if not la.is_zero(R)]
    ops = [lambda A, M=M: la.commutator(M, A) for M in C if not la.is_zero(M)]
    return la.span_closure(seeds, la.commutator, ops, n=n)


def check_sp_homomorphism(D, s: GeomStructure) -> list[Check]:
    """The three clauses for ``D: g -> sp(n)``: skew, commuting with each
    ``J_alpha``, and ``D_{[X,Y]} = [D_X, D_Y]``."""
    metric = s.require_metric()
    g = s.algebra
    n = g.dim
    G = metric.gram
    results = []
    skew_bad = next(
        (i for i, M in enumerate(D) if la.madd(la.matmul(la.transpose(M), G), la.matmul(G, M)) != la.zeros(n)),
        None,
    )
    results.append(
        Check("skew", skew_bad is None, "" if skew_bad is None else f"D_e{skew_bad + 1} is not skew-symmetric",
              None if skew_bad is None else (skew_bad,))
    )
    comm_bad = None
    for a, J in enumerate(s.complex, 1):
        for i, M in enumerate(D):
            if la.commutator(M, J) != la.zeros(n):
                comm_bad = (a, i)
                break
        if comm_bad:
            break
    results.append(
        Check("commutes", comm_bad is None,
              "" if comm_bad is None else f"D_e{comm_bad[1] + 1} does not commute with J{comm_bad[0]}", comm_bad)
    )
    flat_bad = next(((i, j) for (i, j), R in curvature(D, g).items() if not la.is_zero(R)), None)
    results.append(
        Check("homomorphism", flat_bad is None,
              "" if flat_bad is None else f"D_[e{flat_bad[0] + 1},e{flat_bad[1] + 1}] != [D_e{flat_bad[0] + 1}, D_e{flat_bad[1] + 1}]",
              flat_bad)
    )
    return results


def validate(s: GeomStructure) -> list[Check]:
    """Structural validation: Jacobi, metric compatibility, complex
    structures (and quaternion relations for a triple)."""
    g = s.algebra
    n = g.dim
    out = []
    defect, wit = jacobi_defect(g)
    out.append(Check("jacobi", not defect, "" if not defect else f"residual {defect} on e{wit[0] + 1}, e{wit[1] + 1}, e{wit[2] + 1}", wit))
    if not out[-1].ok:
        return out
    for a, J in enumerate(s.complex, 1):
        sq_ok = la.madd(la.matmul(J, J), la.identity(n)) == la.zeros(n)
        out.append(Check(f"J{a}^2=-id", sq_ok))
        if sq_ok:
            ok, w = is_integrable(J, g)
            out.append(Check(f"J{a} integrable", ok, "" if ok else f"N(e{w[0] + 1}, e{w[1] + 1}) != 0", w))
        if s.metric is not None:
            G = s.metric.gram
            comp = la.matmul(la.matmul(la.transpose(J), G), J) == G
            out.append(Check(f"g compatible with J{a}", comp))
    if s.is_triple:
        J1, J2, J3 = s.complex
        out.append(Check("J1 J2 = J3", la.matmul(J1, J2) == J3))
        out.append(Check("J2 J1 = -J3", la.matmul(J2, J1) == la.mscale(-1, J3)))
    return out
