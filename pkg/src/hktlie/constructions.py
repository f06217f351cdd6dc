"""Tangent algebras, quaternionic extensions and the Kaehler doubling.

Basis conventions: in a doubled algebra the first copy keeps ``e_1..e_n``
and ``(0, e_i)`` becomes ``e_{n+i}``.  In ``g x| H^q`` the quaternion
coordinates follow ``g``'s basis, each ``H`` factor in the order
``(1, i, j, k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .errors import ConstructionError, InternalConsistencyError, PreconditionError
from .geometry import (
    GeomStructure,
    Metric,
    check_hypercomplex,
    curvature,
    kaehler_form,
    parallel_defects,
    torsion,
)
from .lie import LieAlgebra, ce_differential, jacobi_defect
from .linalg import Matrix
from .scalar import ONE, ZERO

__all__ = [
    "quaternion_left_mult",
    "QuatRep",
    "double_bracket",
    "tangent_algebra",
    "swapped_lift",
    "tangent_lift_connection",
    "iterate_tangent",
    "rho_extension",
    "rho_lift_connection",
    "kaehler_to_hkt",
]

# left multiplication by i, j, k on H = R^4 with basis (1, i, j, k)
_L = {
    1: ((0, -1, 0, 0), (1, 0, 0, 0), (0, 0, 0, -1), (0, 0, 1, 0)),
    2: ((0, 0, -1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, -1, 0, 0)),
    3: ((0, 0, 0, -1), (0, 0, -1, 0), (0, 1, 0, 0), (1, 0, 0, 0)),
}


def quaternion_left_mult(alpha: int, q: int) -> Matrix:
    """Left multiplication by ``i``, ``j`` or ``k`` (``alpha`` = 1, 2, 3) on ``H^q``."""
    blockm = la.matrix(_L[alpha])
    return la.diag(*([blockm] * q))


@dataclass(frozen=True)
class QuatRep:
    """``rho: g -> gl(q, H)`` as one ``4q x 4q`` real matrix per basis vector."""

    q: int
    matrices: tuple

    def __post_init__(self):
        mats = tuple(la.matrix(m) for m in self.matrices)
        for m in mats:
            if la.shape(m) != (4 * self.q, 4 * self.q):
                raise PreconditionError(f"representation matrices must be {4 * self.q}x{4 * self.q}")
        object.__setattr__(self, "matrices", mats)

    def left_mult(self) -> tuple:
        return tuple(quaternion_left_mult(a, self.q) for a in (1, 2, 3))

    def validate(self, g: LieAlgebra) -> None:
        """Raise :class:`ConstructionError` unless ``rho`` is a homomorphism
        into the commutant of left quaternionic multiplication."""
        if len(self.matrices) != g.dim:
            raise ConstructionError(f"need {g.dim} matrices, got {len(self.matrices)}")
        for a, L in enumerate(self.left_mult(), 1):
            for i, m in enumerate(self.matrices):
                if la.commutator(m, L) != la.zeros(4 * self.q):
                    raise ConstructionError(f"rho(e{i + 1}) does not commute with L{a}", (i, a))
        for (i, j), R in curvature(self.matrices, g).items():
            if not la.is_zero(R):
                raise ConstructionError(f"rho([e{i + 1}, e{j + 1}]) != [rho(e{i + 1}), rho(e{j + 1})]", (i, j))


def double_bracket(g: LieAlgebra, D, m: int | None = None) -> LieAlgebra:
    """``g x|_D V`` with ``[(X,V),(Y,W)] = ([X,Y], D_X W - D_Y V)``,
    ``V`` of dimension ``m`` (``dim g`` by default)."""
    n = g.dim
    m = n if m is None else m
    br: dict[tuple[int, int], dict[int, object]] = {}
    for (i, j), row in g.structure.items():
        br[(i, j)] = row
    for i in range(n):
        M = D[i]
        for j in range(m):
            out = {n + r: M[r][j] for r in range(m) if M[r][j]}
            if out:
                br[(i, n + j)] = out
    return LieAlgebra(n + m, br)


def _require_flat_parallel(D, s: GeomStructure):
    g = s.algebra
    if len(D) != g.dim:
        raise ConstructionError(f"connection has {len(D)} matrices, algebra has dim {g.dim}")
    for (i, j), R in curvature(D, g).items():
        if not la.is_zero(R):
            raise ConstructionError(f"D is not flat: R(e{i + 1}, e{j + 1}) != 0", (i, j))
    bad = parallel_defects(D, None, s.complex)
    if bad:
        raise ConstructionError(f"D does not parallelise {', '.join(bad)}")


def _require_valid_output(out: GeomStructure):
    defect, wit = jacobi_defect(out.algebra)
    if defect:
        raise InternalConsistencyError("constructed bracket violates Jacobi", wit)
    if out.is_triple:
        chk = check_hypercomplex(*out.complex, out.algebra)
        if not chk.ok:
            raise InternalConsistencyError(f"constructed triple is not hypercomplex: {chk.detail}", chk.witness)


def tangent_algebra(s: GeomStructure, D) -> GeomStructure:
    """``T_D g`` with the lifted triple ``J~_a = J_a + J_a`` acting on both
    copies, and the orthogonal sum metric ``g + g``.

    The lift is block-diagonal.  The swap variant ``(X1, X2) -> (J2 X2, J2 X1)``
    has Nijenhuis tensor ``(T^D(X, Y), 0)`` on the first copy, so it is only
    integrable for torsion-free ``D``; see :func:`swapped_lift`.
    """
    if not s.is_triple:
        raise PreconditionError("tangent_algebra needs a hypercomplex triple")
    D = tuple(la.matrix(M) for M in D)
    _require_flat_parallel(D, s)
    out = GeomStructure(
        double_bracket(s.algebra, D),
        s.metric.direct_sum(s.metric) if s.metric is not None else None,
        tuple(la.diag(J, J) for J in s.complex),
    )
    _require_valid_output(out)
    return out


def swapped_lift(s: GeomStructure) -> tuple:
    """The almost complex triple ``(J1, J1)``, ``(X1, X2) -> (J2 X2, J2 X1)``,
    product, on the doubled space.  Kept for comparison only."""
    n = s.dim
    J1, J2, _ = s.complex
    Z = la.zeros(n)
    t1 = la.diag(J1, J1)
    t2 = la.block([[Z, J2], [J2, Z]])
    return (t1, t2, la.matmul(t1, t2))


def tangent_lift_connection(D) -> tuple:
    """``D~_{(X1,X2)}(Y1,Y2) = (D_{X1} Y1, D_{X1} Y2)`` on ``T_D g``."""
    n = len(D)
    lifted = [la.diag(M, M) for M in D]
    lifted.extend([la.zeros(2 * n)] * n)
    return tuple(lifted)


def iterate_tangent(ts: GeomStructure, D) -> GeomStructure:
    """Apply :func:`tangent_algebra` to ``ts = T_D g`` with the lifted ``D~``.

    ``D~`` is re-checked for flatness and for preserving the metric and the
    triple before use.
    """
    D = tuple(la.matrix(M) for M in D)
    if ts.dim != 2 * len(D):
        raise ConstructionError(f"structure of dim {ts.dim} is not a tangent algebra over dim {len(D)}")
    Dt = tangent_lift_connection(D)
    bad = parallel_defects(Dt, ts.metric, ts.complex)
    if bad:
        raise ConstructionError(f"lifted connection does not preserve {', '.join(bad)}")
    return tangent_algebra(ts, Dt)


def rho_extension(s: GeomStructure, r: QuatRep) -> GeomStructure:
    """``T_rho g = g x|_rho H^q`` with ``J~_alpha = J_alpha + L_alpha`` and the
    orthogonal sum of ``g`` and the standard inner product on ``R^{4q}``."""
    if not s.is_triple:
        raise PreconditionError("rho_extension needs a hypercomplex triple")
    r.validate(s.algebra)
    Ls = r.left_mult()
    alg = double_bracket(s.algebra, r.matrices, 4 * r.q)
    cx = tuple(la.diag(J, L) for J, L in zip(s.complex, Ls))
    metric = s.metric.direct_sum(Metric.identity(4 * r.q)) if s.metric is not None else None
    out = GeomStructure(alg, metric, cx)
    _require_valid_output(out)
    return out


def rho_lift_connection(r: QuatRep, n: int) -> tuple:
    """Connection ``(X, V) -> diag(0, rho(X))`` on ``T_rho g``; flat and
    hyper-Hermitian when ``rho`` lands in ``sp(q)``."""
    size = n + 4 * r.q
    mats = [la.diag(la.zeros(n), M) for M in r.matrices]
    mats.extend([la.zeros(size)] * (4 * r.q))
    return tuple(mats)


def kaehler_to_hkt(h: GeomStructure, D, *, cross_check: bool = True) -> GeomStructure:
    """Double a Hermitian algebra with a flat, torsion-free complex
    connection ``D``: bracket of ``T_D g``, triple
    ``J1(X1,X2) = (J X1, -J X2)``, ``J2(X1,X2) = (X2, -X1)``, ``J3 = J1 J2``.

    With ``cross_check`` the result's HKT verdict is compared against
    Kaehlerness of ``h``.
    """
    if len(h.complex) != 1:
        raise PreconditionError("kaehler_to_hkt needs a single complex structure")
    D = tuple(la.matrix(M) for M in D)
    _require_flat_parallel(D, h)
    for (i, j), v in torsion(D, h.algebra).items():
        if any(v):
            raise ConstructionError(f"D has torsion at (e{i + 1}, e{j + 1})", (i, j))
    n = h.dim
    J = h.J(1)
    Z, I = la.zeros(n), la.identity(n)
    j1 = la.diag(J, la.mscale(-1, J))
    j2 = la.block([[Z, I], [la.mscale(-1, I), Z]])
    out = GeomStructure(
        double_bracket(h.algebra, D),
        h.metric.direct_sum(h.metric) if h.metric is not None else None,
        (j1, j2, la.matmul(j1, j2)),
    )
    _require_valid_output(out)
    if cross_check and h.metric is not None:
        from .geometry import hkt_check

        is_kaehler = ce_differential(kaehler_form(J, h.metric), h.algebra).is_zero()
        if hkt_check(out).hkt != is_kaehler:
            raise InternalConsistencyError("doubled structure HKT verdict differs from base Kaehler verdict")
    return out
