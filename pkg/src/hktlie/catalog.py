"""Built-in exact encodings of the worked examples.

Each entry bundles a structure, its named connections / quaternionic
representations / auxiliary endomorphisms, and a list of expected values.
Every expectation records where the value comes from (``published`` for
values quoted from the literature, ``derived`` for values computed by an
independent hand or brute-force route, ``identity`` for defining
properties) together with a short note.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from . import linalg as la
from .constructions import (
    QuatRep,
    kaehler_to_hkt,
    rho_extension,
    rho_lift_connection,
    tangent_algebra,
    tangent_lift_connection,
)
from .geometry import GeomStructure, Metric, validate
from .lie import KForm, LieAlgebra, ce_differential, render_terms
from .linalg import Matrix
from .scalar import ONE, SQRT2, ZERO, as_scalar

__all__ = [
    "Expectation",
    "CatalogEntry",
    "CatalogValidationError",
    "BUILTIN_NAMES",
    "builtin",
    "complex_structure",
    "endomorphism",
    "structure_equations",
    "validate_entry",
]

SOURCES = ("published", "derived", "identity")


@dataclass(frozen=True)
class Expectation:
    """Expected value of one quantity.

    ``value`` is a canonical string: a form in monomial notation, ``true`` /
    ``false`` for flags, an integer, or structure equations joined by ``;``.
    """

    key: str
    value: str
    source: str
    note: str = ""
    discrepancy: str = ""

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown expectation source {self.source!r}")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    structure: GeomStructure
    connections: dict = field(default_factory=dict)
    quat_reps: dict = field(default_factory=dict)
    endomorphisms: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    expected: tuple = ()
    description: str = ""

    def expectation(self, key: str) -> Expectation | None:
        return next((e for e in self.expected if e.key == key), None)


class CatalogValidationError(ValueError):
    """Semantic validation of an entry failed (distinct from syntax errors)."""

    def __init__(self, message: str, checks=()):
        super().__init__(message)
        self.checks = list(checks)


def validate_entry(entry: CatalogEntry) -> None:
    """Raise :class:`CatalogValidationError` unless every structural check passes."""
    checks = validate(entry.structure)
    bad = [c for c in checks if not c.ok]
    if bad:
        first = bad[0]
        raise CatalogValidationError(f"{entry.name}: {first.name} failed {first.detail}".rstrip(), checks)
    n = entry.structure.dim
    for cname, C in entry.connections.items():
        if len(C) != n or any(la.shape(M) != (n, n) for M in C):
            raise CatalogValidationError(f"{entry.name}: connection {cname!r} must have {n} matrices of size {n}x{n}")
    for rname, r in entry.quat_reps.items():
        if len(r.matrices) != n:
            raise CatalogValidationError(f"{entry.name}: representation {rname!r} must have {n} matrices")


# -- small builders -----------------------------------------------------------------


def complex_structure(dim: int, images: dict) -> Matrix:
    """Complete ``J`` from 1-based images ``{a: {b: c}}`` (``J e_a = c e_b``)
    using ``J^2 = -id``: each listed image also fixes ``J e_b = -(1/c) e_a``."""
    cols: dict[int, dict[int, object]] = {}
    for a, img in images.items():
        cols[a - 1] = {b - 1: as_scalar(c) for b, c in img.items()}
        if len(img) == 1:
            (b, c), = img.items()
            cols.setdefault(b - 1, {a - 1: -ONE / as_scalar(c)})
    missing = [j + 1 for j in range(dim) if j not in cols]
    if missing:
        raise ValueError(f"images of e{missing} not determined")
    return tuple(tuple(cols[j].get(i, ZERO) for j in range(dim)) for i in range(dim))


endomorphism = complex_structure


def structure_equations(g: LieAlgebra) -> str:
    """``d e^1 ; d e^2 ; ...`` in monomial notation."""
    return " ; ".join(ce_differential(KForm.basis(g.dim, k + 1), g).render() for k in range(g.dim))


def _sum(*terms) -> Matrix:
    n = len(terms[0][1])
    acc = la.zeros(n)
    for c, m in terms:
        acc = la.madd(acc, la.mscale(c, m))
    return acc


HALF = as_scalar("1/2")
HALF_SQRT2 = SQRT2 / 2


def _e(key, value, source, note="", discrepancy=""):
    return Expectation(key, str(value).lower() if isinstance(value, bool) else str(value), source, note, discrepancy)


def bracket_key(i: int, j: int) -> str:
    return f"bracket[e{i},e{j}]"


def render_vector(v) -> str:
    return render_terms((c, f"e{k + 1}") for k, c in enumerate(v))


# -- entries ---------------------------------------------------------------------------


def _sp1_u1() -> CatalogEntry:
    g = LieAlgebra.from_triples(4, [(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)])
    J1 = complex_structure(4, {1: {4: -1}, 2: {3: 1}})
    J2 = complex_structure(4, {1: {3: -1}, 2: {4: -1}})
    s = GeomStructure(g, Metric.identity(4), (J1, J2, la.matmul(J1, J2)))
    Jp1 = endomorphism(4, {1: {4: 1}, 2: {3: 1}})
    Jp2 = endomorphism(4, {1: {3: -1}, 2: {4: 1}})
    Jp3 = endomorphism(4, {1: {2: 1}, 3: {4: 1}})
    D = (la.mscale(HALF, Jp1), la.mscale(HALF, Jp2), la.mscale(HALF, Jp3), la.zeros(4))
    return CatalogEntry(
        "sp1_u1",
        s,
        connections={"D": D},
        endomorphisms={"J'1": Jp1, "J'2": Jp2, "J'3": Jp3},
        expected=(
            _e("hkt", True, "published", "standard strong HKT structure on sp(1)+u(1)"),
            _e("strong", True, "published", "standard strong HKT structure on sp(1)+u(1)"),
            _e("bismut_zero", True, "published", "Bismut connection vanishes identically"),
            _e("D_sp_homomorphism", True, "published", "D is the projection onto sp(1)"),
        ),
        description="sp(1)+u(1) with its standard strong HKT structure and the flat connection D = 1/2 J'",
    )


def _sp1u1_tangent() -> CatalogEntry:
    base = builtin("sp1_u1")
    D = base.connections["D"]
    s = tangent_algebra(base.structure, D)
    h = HALF
    # the displayed relations, one (i, j, k, c) per bracket [e_i, e_j] = c e_k
    shown = [
        (1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1),
        (1, 8, 5, -h), (2, 7, 5, h), (3, 6, 5, -h),
        (1, 7, 6, -h), (2, 8, 6, -h), (3, 5, 6, h),
        (1, 6, 7, h), (2, 5, 7, -h), (3, 8, 7, -h),
        (1, 5, 8, h), (2, 6, 8, h), (3, 7, 8, -h),
    ]
    typo = (
        "displayed value violates Jacobi (witness e1, e2, e7); "
        "D_e3 = 1/2 J'3 with J'3 e3 = e4 gives +1/2 e8"
    )
    expected = [
        _e(bracket_key(i, j), render_terms([(c, f"e{k}")]), "published", "displayed structure equations",
           typo if (i, j) == (3, 7) else "")
        for i, j, k, c in shown
    ]
    expected.append(_e("bracket_count", len(shown), "published", "no brackets beyond the displayed ones"))
    return CatalogEntry(
        "sp1u1_tangent",
        s,
        connections={"D_lift": tangent_lift_connection(D)},
        expected=tuple(expected) + (
            _e("hkt", True, "published", "strong HKT structure with flat Obata connection"),
            _e("strong", True, "published", "strong HKT structure with flat Obata connection"),
            _e("dc", "0", "published", "strong: the torsion form is closed"),
            _e("obata_flat", True, "published", "flat Obata connection"),
        ),
        description="tangent algebra of sp(1)+u(1) along the projection connection D",
    )


def _aff_C() -> CatalogEntry:
    g = LieAlgebra.from_structure_equations(["-e^{13} + e^{24}", "-e^{23} - e^{14}", "0", "0"])
    J1 = complex_structure(4, {1: {4: -1}, 2: {3: 1}})
    J2 = complex_structure(4, {1: {2: 1}, 3: {4: -1}})
    s = GeomStructure(g, Metric.identity(4), (J1, J2, la.matmul(J1, J2)))
    Jp1 = endomorphism(4, {1: {4: 1}, 2: {3: 1}})
    Jp2 = endomorphism(4, {1: {2: -1}, 3: {4: -1}})
    Jp3 = endomorphism(4, {1: {3: -1}, 2: {4: 1}})
    a1, a2, a3, b = 1, 0, 0, 1
    De3 = _sum((a1, Jp1), (a2, Jp2), (a3, Jp3))
    D = (la.zeros(4), la.zeros(4), De3, la.mscale(b, De3))
    return CatalogEntry(
        "aff_C",
        s,
        connections={"D": D},
        endomorphisms={"J'1": Jp1, "J'2": Jp2, "J'3": Jp3},
        parameters={"a1": "1", "a2": "0", "a3": "0", "b": "1"},
        expected=(
            _e("abelian_hypercomplex", True, "published", "every hypercomplex structure on aff(C) is abelian"),
            _e("hkt", True, "published", "weak HKT structure on aff(C)"),
            _e("D_sp_homomorphism", True, "published", "D: aff(C) -> sp(1) is a homomorphism"),
            _e("lift_hkt", True, "published", "induced structure on T_D aff(C) is weak HKT"),
            _e("lift_weak", True, "published", "induced structure on T_D aff(C) is weak HKT"),
            _e("lift_abelian_hypercomplex", False, "published", "lifted triple is not abelian"),
        ),
        description="aff(C) with its abelian hypercomplex structure; D at (a1,a2,a3,b) = (1,0,0,1)",
    )


def _alg3() -> CatalogEntry:
    g = LieAlgebra.from_structure_equations(["0", "-e^{12}", "-e^{13}", "-e^{14}"])
    J1 = complex_structure(4, {1: {4: -1}, 2: {3: 1}})
    J2 = complex_structure(4, {1: {2: 1}, 3: {4: -1}})
    s = GeomStructure(g, Metric.identity(4), (J1, J2, la.matmul(J1, J2)))
    Jp1 = endomorphism(4, {1: {4: 1}, 2: {3: 1}})
    Jp2 = endomorphism(4, {1: {2: -1}, 3: {4: -1}})
    Jp3 = endomorphism(4, {1: {3: -1}, 2: {4: 1}})
    a1, a2, a3 = 1, 0, 0
    D = (_sum((a1, Jp1), (a2, Jp2), (a3, Jp3)), la.zeros(4), la.zeros(4), la.zeros(4))
    return CatalogEntry(
        "alg3",
        s,
        connections={"D": D},
        endomorphisms={"J'1": Jp1, "J'2": Jp2, "J'3": Jp3},
        parameters={"a1": "1", "a2": "0", "a3": "0"},
        expected=(
            _e("hkt", True, "published", "weak HKT structure"),
            _e("weak", True, "published", "weak HKT structure"),
            _e("D_sp_homomorphism", True, "published", "D: g -> sp(1) is a homomorphism"),
        ),
        description="the algebra (0, -e^12, -e^13, -e^14) with D_e1 = J'1",
    )


def _alg4() -> CatalogEntry:
    g = LieAlgebra.from_structure_equations(["0", "-1/2*e^{12}", "-1/2*e^{13}", "-e^{23} - e^{14}"])
    J1 = complex_structure(4, {1: {4: 1}, 2: {3: -1}})
    J2 = complex_structure(4, {1: {2: HALF_SQRT2}, 4: {3: HALF_SQRT2}})
    metric = Metric.diagonal([1, 2, 2, 1])
    s = GeomStructure(g, metric, (J1, J2, la.matmul(J1, J2)))
    Jp1 = endomorphism(4, {1: {4: -1}, 2: {3: -1}})
    Jp2 = endomorphism(4, {1: {2: -HALF_SQRT2}, 4: {3: HALF_SQRT2}})
    Jp3 = endomorphism(4, {1: {3: HALF_SQRT2}, 4: {2: HALF_SQRT2}})
    a1, a2, a3 = 1, 0, 0
    D = (_sum((a1, Jp1), (a2, Jp2), (a3, Jp3)), la.zeros(4), la.zeros(4), la.zeros(4))
    obata_expected = " ; ".join(
        [
            render_terms([(as_scalar("3/4"), "id")]),
            render_terms([(-SQRT2 / 4, "J'2")]),
            render_terms([(SQRT2 / 4, "J'3")]),
            render_terms([(as_scalar("1/4"), "J'1")]),
        ]
    )
    return CatalogEntry(
        "alg4",
        s,
        connections={"D": D},
        endomorphisms={"J'1": Jp1, "J'2": Jp2, "J'3": Jp3},
        parameters={"a1": "1", "a2": "0", "a3": "0"},
        expected=(
            _e("obata", obata_expected, "published", "Obata connection of the algebra (4)"),
            _e("obata_holonomy_dim", 3, "published", "hol(nabla^O) = span{J'_alpha} = sl(1,H)"),
            _e("lift_obata_holonomy_dim", 3, "published", "tangent lift has the same infinitesimal holonomy"),
            _e("balanced", False, "published", "g (hence its lift) is not balanced"),
            _e("lift_hkt", True, "published", "induced structure on the tangent algebra is weak HKT"),
        ),
        description="the algebra (0, -1/2 e^12, -1/2 e^13, -e^23 - e^14) with metric (e1)^2+(e4)^2+2((e2)^2+(e3)^2)",
    )


def _heis8() -> CatalogEntry:
    g = LieAlgebra.from_triples(
        8,
        [(5, 6, 2, 1), (5, 7, 3, 1), (5, 8, 4, 1), (6, 7, 4, -1), (6, 8, 3, 1), (7, 8, 2, -1)],
    )
    J1 = complex_structure(8, {1: {2: 1}, 3: {4: 1}, 5: {6: 1}, 7: {8: 1}})
    J2 = complex_structure(8, {1: {3: 1}, 2: {4: -1}, 5: {7: 1}, 6: {8: -1}})
    J3 = complex_structure(8, {1: {4: 1}, 2: {3: 1}, 5: {8: 1}, 6: {7: 1}})
    s = GeomStructure(g, Metric.identity(8), (J1, J2, J3))
    rho_e1 = la.matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    rho = QuatRep(1, (rho_e1,) + (la.zeros(4),) * 7)
    return CatalogEntry(
        "heis8",
        s,
        quat_reps={"rho1": rho},
        expected=(
            _e("hkt", True, "published", "abelian hypercomplex with hyper-Hermitian metric"),
            _e("abelian_hypercomplex", True, "published", "abelian hypercomplex structure"),
            _e("balanced", True, "published", "g is balanced"),
            _e("theta", "0", "published", "balanced: vanishing Lee form"),
        ),
        description="8-dimensional HKT algebra: R e1 + a 2-step nilpotent algebra of Heisenberg type",
    )


def _heis8_rho12() -> CatalogEntry:
    base = builtin("heis8")
    rho = base.quat_reps["rho1"]
    s = rho_extension(base.structure, rho)
    return CatalogEntry(
        "heis8_rho12",
        s,
        connections={"rho1_lift": rho_lift_connection(rho, base.structure.dim)},
        expected=(
            _e("hkt", True, "published", "12-dimensional balanced HKT Lie algebra"),
            _e("balanced", True, "published", "12-dimensional balanced HKT Lie algebra"),
            _e("abelian_hypercomplex", False, "published", "the extended triple is not abelian"),
            _e("weak", True, "derived", "torsion form of the base is not closed and is preserved"),
        ),
        description="g x|_rho H with rho(e1) = right multiplication by i",
    )


def _e2_central() -> CatalogEntry:
    g = LieAlgebra.from_triples(4, [(2, 3, 4, 1), (2, 4, 3, -1)])
    J = complex_structure(4, {1: {2: 1}, 3: {4: 1}})
    s = GeomStructure(g, Metric.identity(4), (J,))
    rot = la.matrix([[0, -1], [1, 0]])
    D = (la.diag(la.identity(2), la.zeros(2)), la.diag(rot, rot), la.zeros(4), la.zeros(4))
    return CatalogEntry(
        "e2_central",
        s,
        connections={"D": D},
        expected=(_e("kahler", True, "published", "(g, J, g) is Kaehler"),),
        description="R e1 + e(2) with a Kaehler structure and a flat torsion-free complex connection",
    )


def _e2_tangent() -> CatalogEntry:
    base = builtin("e2_central")
    s = kaehler_to_hkt(base.structure, base.connections["D"])
    return CatalogEntry(
        "e2_tangent",
        s,
        expected=(
            _e("omega1", "e^{12} + e^{34} - e^{56} - e^{78}", "published", "Kaehler form of (J1, g~)"),
            _e("c", "2*e^{256}", "published", "torsion 3-form c = -J1 d omega1"),
            _e("dc", "-4*e^{1256}", "published", "dc, hence c is not closed"),
            _e("theta", "2*e^{1}", "published", "Lee form"),
            _e("dtheta", "0", "published", "the Lee form is closed"),
            _e("dstar_c", "0", "published", "c is co-closed"),
            _e("hkt", True, "published", "doubling of a Kaehler algebra is HKT"),
            _e("weak", True, "published", "c is not closed"),
            _e("balanced", False, "published", "metric not balanced"),
            _e("conformally_balanced", True, "published", "closed Lee form"),
            _e("torsion_coclosed", True, "published", "c is co-closed"),
        ),
        description="HKT doubling of R+e(2)",
    )


SU21_DISCREPANCY = (
    "the published value equals +J1 d omega1 built from the printed D, which does not commute with J; "
    "no torsion-free complex D yields it with the sign that reproduces the R+e(2) example"
)


def _su21_solv() -> CatalogEntry:
    h = HALF
    g = LieAlgebra.from_triples(4, [(1, 4, 1, -h), (2, 4, 2, -h), (1, 2, 3, 1), (3, 4, 3, -1)])
    J = complex_structure(4, {1: {2: 1}, 3: {4: -1}})
    s = GeomStructure(g, Metric.identity(4), (J,))
    # row 4 of D_e1 and D_e2 carries the sign that makes D commute with J;
    # with the opposite sign D J = -J D on those two directions
    De1 = la.matrix([[0, 0, 0, 0], [0, 0, 0, 0], [0, h, 0, 0], [h, 0, 0, 0]])
    De2 = la.matrix([[0, 0, 0, 0], [0, 0, 0, 0], [-h, 0, 0, 0], [0, h, 0, 0]])
    De4 = la.diag(la.mscale(h, la.identity(2)), la.identity(2))
    return CatalogEntry(
        "su21_solv",
        s,
        connections={"D": (De1, De2, la.zeros(4), De4)},
        expected=(
            _e("kahler", True, "published", "Kaehler, non-flat"),
            _e("levi_civita_flat", False, "published", "Kaehler, non-flat"),
        ),
        description="solvable model of complex hyperbolic space SU(2,1)/S(U(2)xU(1))",
    )


def _su21_tangent() -> CatalogEntry:
    base = builtin("su21_solv")
    s = kaehler_to_hkt(base.structure, base.connections["D"])
    c = KForm.parse("-1/2*e^{268} - 1/2*e^{158} + 2*e^{378} + 1/2*e^{167} - 1/2*e^{257} - e^{356}", 8)
    return CatalogEntry(
        "su21_tangent",
        s,
        expected=(
            _e("omega1", "e^{12} - e^{34} - e^{56} + e^{78}", "published", "Kaehler form of (J1, g~)"),
            _e("c", c.render(), "published", "torsion 3-form c = -J1 d omega1", SU21_DISCREPANCY),
            _e("theta", "-3*e^{4}", "published", "Lee form", SU21_DISCREPANCY),
            _e("dtheta", "0", "published", "the Lee form is closed"),
            _e("hkt", True, "published", "doubling of a Kaehler algebra is HKT"),
            _e("weak", True, "published", "c is not closed"),
            _e("balanced", False, "published", "metric not balanced"),
            _e("conformally_balanced", True, "published", "closed Lee form"),
        ),
        description="HKT doubling of the SU(2,1) solvable Kaehler algebra",
    )


_BUILDERS = {
    "sp1_u1": _sp1_u1,
    "aff_C": _aff_C,
    "alg3": _alg3,
    "alg4": _alg4,
    "heis8": _heis8,
    "heis8_rho12": _heis8_rho12,
    "sp1u1_tangent": _sp1u1_tangent,
    "e2_central": _e2_central,
    "e2_tangent": _e2_tangent,
    "su21_solv": _su21_solv,
    "su21_tangent": _su21_tangent,
}

BUILTIN_NAMES = tuple(_BUILDERS)


@functools.lru_cache(maxsize=None)
def builtin(name: str) -> CatalogEntry:
    """Return a validated built-in entry; ``KeyError`` for unknown names."""
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None
    entry = build()
    validate_entry(entry)
    return entry
