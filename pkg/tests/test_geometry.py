import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from hktlie import linalg as la
from hktlie.catalog import BUILTIN_NAMES, builtin, complex_structure
from hktlie.classify import classify
from hktlie.errors import PreconditionError
from hktlie.geometry import (
    GeomStructure,
    Metric,
    bismut,
    check_sp_homomorphism,
    codifferential,
    curvature,
    form_inner,
    hkt_check,
    infinitesimal_holonomy,
    is_flat,
    is_integrable,
    kaehler_form,
    lee_form,
    levi_civita,
    obata,
    obata_closed_form,
    parallel_defects,
    sigma_form,
    torsion,
    torsion_3form,
    validate,
    zero_connection,
)
from hktlie.lie import KForm, LieAlgebra, ce_differential, wedge
from hktlie.scalar import Scalar
from hktlie.verify import compatible_metrics
from strategies import forms, vectors

HKT_NAMES = [n for n in BUILTIN_NAMES if builtin(n).structure.is_triple]
HERMITIAN_NAMES = [n for n in BUILTIN_NAMES if not builtin(n).structure.is_triple]
FOUR_DIM = ["sp1_u1", "aff_C", "alg3", "alg4"]
seeds = st.integers(min_value=0, max_value=10 ** 6)


def _perturbed(name, seed):
    s = builtin(name).structure
    (m,) = compatible_metrics(s, 1, seed=seed)
    return GeomStructure(s.algebra, m, s.complex)


def test_metric_rejects_indefinite_and_asymmetric():
    with pytest.raises(PreconditionError):
        Metric([[1, 2], [2, 1]])
    with pytest.raises(PreconditionError):
        Metric([[1, 0], [1, 1]])
    with pytest.raises(PreconditionError):
        Metric.diagonal([1, 0])


@given(vectors(4), vectors(4))
def test_kaehler_form_definition(x, y):
    s = builtin("alg4").structure
    w = kaehler_form(s.J(1), s.metric)
    assert w(x, y) == s.metric.inner(la.matvec(s.J(1), x), y)


def test_nijenhuis_detects_non_integrable_structure():
    g = builtin("alg4").structure.algebra
    J = complex_structure(4, {1: {2: 1}, 3: {4: 1}})
    assert is_integrable(J, g) == (False, (0, 2))
    J = complex_structure(4, {1: {4: 1}, 2: {3: 1}})
    assert is_integrable(J, g) == (True, None)


def test_validate_reports_jacobi_witness():
    g = LieAlgebra.from_triples(3, [(1, 2, 3, 1), (2, 3, 2, 1)])
    (chk,) = validate(GeomStructure(g))
    assert chk.name == "jacobi" and not chk.ok and chk.witness == (0, 1, 2)


@pytest.mark.parametrize("name", HKT_NAMES + HERMITIAN_NAMES)
def test_levi_civita_is_metric_and_torsion_free(name):
    s = builtin(name).structure
    C = levi_civita(s)
    assert not parallel_defects(C, s.metric)
    assert not any(any(v) for v in torsion(C, s.algebra).values())


def test_levi_civita_of_abelian_algebra_is_zero():
    s = GeomStructure(LieAlgebra(3), Metric.identity(3))
    assert levi_civita(s) == zero_connection(3)


@pytest.mark.parametrize("name", HKT_NAMES)
def test_bismut_agrees_across_the_triple(name):
    s = builtin(name).structure
    C1, C2, C3 = (bismut(s, a) for a in (1, 2, 3))
    assert C1 == C2 == C3
    assert not parallel_defects(C1, s.metric, s.complex)


def test_bismut_vanishes_on_sp1_u1():
    s = builtin("sp1_u1").structure
    assert all(la.is_zero(M) for M in bismut(s, 1))


@pytest.mark.parametrize("name", HKT_NAMES + HERMITIAN_NAMES)
def test_torsion_form_is_minus_j_d_omega(name):
    s = builtin(name).structure
    c = torsion_3form(bismut(s, 1), s)
    assert c == -sigma_form(s, 1)


@pytest.mark.parametrize("name", ["sp1_u1", "alg4", "aff_C", "e2_tangent", "su21_tangent", "heis8"])
def test_torsion_and_lee_form_against_dense_oracle(name):
    s = builtin(name).structure
    r = classify(s)
    c = oracle.torsion_form(s)
    assert oracle.as_dict(r.forms["c"]) == c
    assert oracle.as_dict(r.forms["theta"]) == oracle.lee_form(s, c)


# values frozen from the dense oracle above
FROZEN = {
    "sp1_u1": ("e^{123}", "-e^{4}"),
    "aff_C": ("-2*e^{124}", "-2*e^{3}"),
    "alg3": ("2*e^{234}", "2*e^{1}"),
    "alg4": ("3*e^{234}", "3/2*e^{1}"),
    "heis8": ("e^{256} - e^{278} + e^{357} + e^{368} + e^{458} - e^{467}", "0"),
    "su21_tangent": (
        "-1/2*e^{158} - 1/2*e^{167} + 1/2*e^{257} - 1/2*e^{268} + e^{356} - 2*e^{378}",
        "3*e^{4}",
    ),
}


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_torsion_and_lee_forms(name):
    r = classify(builtin(name).structure)
    assert (r.forms["c"].render(), r.forms["theta"].render()) == FROZEN[name]


@pytest.mark.parametrize("name", ["heis8", "sp1u1_tangent"])
def test_dense_oracle_on_non_diagonal_metric(name):
    s = _perturbed(name, 11)
    assert not s.metric.is_diagonal()
    c = oracle.torsion_form(s)
    mine = torsion_3form(bismut(s, 1), s)
    assert oracle.as_dict(mine) == c
    if hkt_check(s).hkt:
        assert oracle.as_dict(lee_form(s, mine)) == oracle.lee_form(s, c)


@settings(max_examples=15)
@given(st.sampled_from(["heis8", "sp1u1_tangent", "e2_tangent", "aff_C", "alg4"]), seeds)
def test_hkt_routes_agree(name, seed):
    v = hkt_check(_perturbed(name, seed))
    assert v.route_a == v.route_b == v.hkt


def test_perturbed_tangent_metric_is_not_hkt():
    v = hkt_check(_perturbed("sp1u1_tangent", 3))
    assert not v.hkt and v.witness is not None


@settings(max_examples=15)
@given(st.sampled_from(["heis8", "aff_C", "alg3", "sp1_u1"]), seeds)
def test_bismut_properties_on_random_compatible_metrics(name, seed):
    s = _perturbed(name, seed)
    C = bismut(s, 1)
    assert not parallel_defects(C, s.metric, [s.J(1)])
    c = torsion_3form(C, s)
    assert c == -sigma_form(s, 1)
    if hkt_check(s).hkt:
        assert bismut(s, 2) == C == bismut(s, 3)
        assert lee_form(s, c, 1) == lee_form(s, c, 2) == lee_form(s, c, 3)


@pytest.mark.parametrize("name", HKT_NAMES)
def test_obata_matches_closed_formula(name):
    s = builtin(name).structure
    assert obata(*s.complex, s.algebra) == obata_closed_form(*s.complex, s.algebra)


@pytest.mark.parametrize("name", FOUR_DIM)
def test_obata_matches_full_christoffel_solve(name):
    s = builtin(name).structure
    mine = obata(*s.complex, s.algebra)
    assert oracle.obata(s) == [oracle.mat(M) for M in mine]


def test_obata_of_alg4():
    e = builtin("alg4")
    O = obata(*e.structure.complex, e.structure.algebra)
    Jp = e.endomorphisms
    q = Scalar(1) / 4
    r2 = Scalar(0, 1) / 4
    assert O[0] == la.mscale(Scalar(3) / 4, la.identity(4))
    assert O[1] == la.mscale(-r2, Jp["J'2"])
    assert O[2] == la.mscale(r2, Jp["J'3"])
    assert O[3] == la.mscale(q, Jp["J'1"])


def test_obata_needs_hypercomplex_triple():
    s = builtin("alg4").structure
    J = complex_structure(4, {1: {2: 1}, 3: {4: 1}})
    with pytest.raises(PreconditionError):
        obata(J, s.J(2), s.J(3), s.algebra)


def test_holonomy_of_alg4_is_sp1():
    e = builtin("alg4")
    hol = infinitesimal_holonomy(obata(*e.structure.complex, e.structure.algebra), e.structure.algebra)
    assert len(hol) == 3
    span = la.SpanBasis(4)
    for M in hol:
        span.add(M)
    assert all(span.contains(e.endomorphisms[k]) for k in ("J'1", "J'2", "J'3"))


def test_flat_connection_has_trivial_holonomy():
    s = builtin("sp1u1_tangent").structure
    O = obata(*s.complex, s.algebra)
    assert is_flat(O, s.algebra)
    assert infinitesimal_holonomy(O, s.algebra) == []


@pytest.mark.parametrize("name", HKT_NAMES + HERMITIAN_NAMES)
def test_codifferential_of_torsion_form_vanishes(name):
    s = builtin(name).structure
    c = torsion_3form(bismut(s, 1), s)
    assert codifferential(c, s).is_zero()


@pytest.mark.parametrize("name", ["alg4", "heis8"])
def test_codifferential_against_dense_adjoint(name):
    s = _perturbed(name, 5) if name == "heis8" else builtin(name).structure
    for key in [(0, 1), (1, 2), (0, 3), (2, 3)]:
        beta = KForm(2, s.dim, {key: 1})
        assert oracle.as_dict(codifferential(beta, s)) == oracle.codifferential({key: sp.Integer(1)}, 2, s)


@st.composite
def adjoint_case(draw):
    name = draw(st.sampled_from(["alg4", "su21_solv", "heis8"]))
    s = builtin(name).structure
    if name == "heis8":
        s = _perturbed(name, draw(seeds))
    k = draw(st.sampled_from([1, 2, 3]))
    return s, draw(forms(k, s.dim)), draw(forms(k - 1, s.dim))


@settings(max_examples=25)
@given(adjoint_case())
def test_codifferential_is_adjoint(case):
    s, beta, alpha = case
    lhs = form_inner(codifferential(beta, s), alpha, s.metric)
    rhs = form_inner(beta, ce_differential(alpha, s.algebra), s.metric)
    assert lhs == rhs


@pytest.mark.parametrize("name", HKT_NAMES)
def test_wedge_power_criterion_matches_lee_form(name):
    s = builtin(name).structure
    r = classify(s)
    m = s.dim // 2
    w = r.omegas[0]
    power = w
    for _ in range(m - 2):
        power = wedge(power, w)
    assert ce_differential(power, s.algebra).is_zero() == r.flags["balanced"]


def test_wedge_power_criterion_values():
    assert not ce_differential(_cube("e2_tangent"), builtin("e2_tangent").structure.algebra).is_zero()
    assert ce_differential(_cube("heis8"), builtin("heis8").structure.algebra).is_zero()


def _cube(name):
    w = classify(builtin(name).structure).omegas[0]
    return wedge(wedge(w, w), w)


def test_sp_homomorphism_clauses():
    e = builtin("aff_C")
    assert all(check_sp_homomorphism(e.connections["D"], e.structure))
    ident = tuple(la.identity(4) if i == 2 else la.zeros(4) for i in range(4))
    skew, comm, hom = check_sp_homomorphism(ident, e.structure)
    assert not skew and comm
    twist = tuple(e.structure.J(1) if i == 0 else la.zeros(4) for i in range(4))
    assert not check_sp_homomorphism(twist, e.structure)[1]


def test_curvature_of_projection_connection_vanishes():
    e = builtin("sp1_u1")
    assert all(la.is_zero(R) for R in curvature(e.connections["D"], e.structure.algebra).values())


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_report_flag_implications(name):
    r = classify(builtin(name).structure)
    f = r.flags
    if f["strong"] is not None:
        assert f["strong"] != f["weak"]
    if f["balanced"]:
        assert f["conformally_balanced"]
    if f["kahler"]:
        assert r.forms["c"].is_zero()
    if f["hkt"]:
        assert f["hyper_hermitian"] and f["hypercomplex"]
    if f["hyper_kahler"]:
        assert f["strong"] and f["balanced"]
