from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sullivan import constructions as C, pd
from sullivan.algebra import FreeAlgebra
from sullivan.dga import (
    DGAMorphism,
    FreeCDGA,
    betti_numbers,
    cohomology,
    induced_map,
    is_quasi_iso_in_range,
    validate,
)
from sullivan.errors import AlgebraError, DegreeCapExceeded, DegreeError, NotClosed

from _strategies import dgas, homogeneous


@pytest.fixture
def s2():
    return FreeCDGA.build([("a", 2), ("b", 3)], {"b": "a^2"})


def test_differential_examples(s2):
    a, b = s2["a"], s2["b"]
    assert s2.d(a * a) == 0
    assert s2.d(b * a) == a ** 3
    assert s2.d(a * b) == a ** 3


def test_differential_in_a_circle_bundle():
    X = C.seven_manifold()
    theta, w, g = X["theta"], X["omega"], X["gamma"]
    assert X.total.d(theta * w) == g * w
    assert g * w == 0
    assert X.total.d(theta * g) == g * g != 0


def test_validate_examples(s2):
    assert validate(s2) == []
    bad = FreeCDGA.build([("a", 2), ("b", 3), ("c", 4)], {"b": "a^2", "c": "a*b"})
    v = validate(bad)
    assert [x.generator for x in v] == ["c"]
    assert v[0].element == bad["a"] ** 3
    assert validate(FreeCDGA.build([("x", 2), ("y", 3), ("z", 5)])) == []


def test_wrong_degree_differential_is_rejected():
    with pytest.raises(DegreeError):
        FreeCDGA.build([("a", 2), ("b", 3)], {"b": "a"})
    with pytest.raises(AlgebraError):
        FreeCDGA.build([("a", 2)], {"q": "a"})


def test_cohomology_examples(s2):
    poly = FreeCDGA.build([("a", 2)])
    H = cohomology(poly, 4)
    assert H.dimension == 1 and H.class_representatives == [poly["a"] ** 2]
    assert cohomology(s2, 4).dimension == 0
    assert cohomology(s2, 4).is_exact(s2["a"] ** 2)
    assert betti_numbers(s2, 8) == [1, 0, 1, 0, 0, 0, 0, 0, 0]


def test_cohomology_report_invariants():
    X = C.seven_manifold()
    for n in range(X.dimension + 1):
        H = cohomology(X.total, n)
        assert H.dimension == len(H.cocycle_basis) - len(H.coboundary_basis)
        for r in H.class_representatives:
            assert X.total.d(r) == 0
        coords = [H.coordinates(r) for r in H.class_representatives]
        assert coords == [[int(i == j) for j in range(H.dimension)] for i in range(H.dimension)]
        for c in H.coboundary_basis:
            assert H.is_exact(c) and not any(H.coordinates(c))


def test_coordinates_reject_non_cocycles(s2):
    with pytest.raises(NotClosed):
        cohomology(s2, 3).coordinates(s2["b"])


def test_degree_cap():
    A = FreeCDGA.build([("a", 2)], degree_cap=4)
    cohomology(A, 4)
    with pytest.raises(DegreeCapExceeded):
        cohomology(A, 5)
    assert cohomology(A.with_cap(None), 6).dimension == 1


@pytest.mark.parametrize(
    "gens,diff",
    [
        ([("x", 3), ("y", 3), ("z", 5)], {"z": "x*y"}),
        ([("x", 1), ("y", 1), ("z", 1)], {"z": "x*y"}),
        ([("x", 3), ("y", 5), ("z", 7), ("w", 7)], {"w": "x*y"}),
    ],
)
def test_euler_characteristic(gens, diff):
    A = FreeCDGA.build(gens, diff)
    top = sum(d for _, d in gens)
    chi_h = sum((-1) ** n * cohomology(A, n).dimension for n in range(top + 1))
    chi_c = sum((-1) ** n * A.algebra.dim(n) for n in range(top + 1))
    assert chi_h == chi_c


def test_euler_characteristic_of_bundles():
    for M in (C.seven_manifold(), C.sharp_example(1, 1)):
        top = M.dimension
        chi_h = sum((-1) ** n * M.betti(n) for n in range(top + 1))
        chi_c = sum((-1) ** n * M.total.algebra.dim(n) for n in range(top + 1))
        assert chi_h == chi_c == 0


def test_identity_and_stage_maps(s2):
    idm = DGAMorphism.identity(s2)
    assert induced_map(idm, 2) == [[1]]
    assert is_quasi_iso_in_range(idm, 10)
    S2 = pd.sphere(2, "s")
    rho = DGAMorphism(s2, S2, {"a": "s"})
    assert induced_map(rho, 2) == [[1]]
    assert is_quasi_iso_in_range(rho, 4)


def test_composition_is_functorial(s2):
    S2 = pd.sphere(2, "s")
    rho = DGAMorphism(s2, S2, {"a": "s"})
    scale = DGAMorphism(s2, s2, {"a": "2*a", "b": "4*b"})
    comp = rho.compose(scale)
    for n in range(5):
        f, g, fg = induced_map(rho, n), induced_map(scale, n), induced_map(comp, n)
        prod = [[sum(f[i][k] * g[k][j] for k in range(len(g))) for j in range(len(g[0]) if g else 0)] for i in range(len(f))]
        assert fg == prod
    assert induced_map(comp, 2) == [[2]]


def test_composition_over_a_bundle():
    X = C.sharp_example(1, 1)
    A = X.total
    # τ ↦ τ + 0 is the identity; compose it with itself
    idm = DGAMorphism.identity(A)
    comp = idm.compose(idm)
    for n in range(X.dimension + 1):
        assert induced_map(comp, n) == induced_map(idm, n)


def test_dropping_theta():
    X = C.seven_manifold()
    base = C.seven_manifold_base()
    trivial = C.circle_bundle_model(base, base.zero())
    f = DGAMorphism(trivial.total, base, {"theta": 0})
    assert induced_map(f, 2) == [[int(i == j) for j in range(5)] for i in range(5)]
    assert cohomology(trivial.total, 3).dimension == 5
    assert induced_map(f, 3) == []
    # with dθ = γ the same assignment is not a chain map
    with pytest.raises(AlgebraError):
        DGAMorphism(X.total, base, {"theta": 0})


def test_wrong_morphisms(s2):
    S2 = pd.sphere(2, "s")
    CP2 = pd.complex_projective(2, "c")
    with pytest.raises(DegreeError):
        DGAMorphism(s2, S2, {"a": "s", "b": "s"})
    with pytest.raises(AlgebraError):
        DGAMorphism(s2, CP2, {"a": "c"})
    zero = DGAMorphism(s2, S2, {})
    v = is_quasi_iso_in_range(zero, 3)
    assert not v and v.failing_degree == 2


def test_injectivity_at_the_edge():
    A = FreeCDGA.build([("a", 2)])
    S2 = pd.sphere(2, "s")
    f = DGAMorphism(A, S2, {"a": "s"})
    assert is_quasi_iso_in_range(f, 2)
    v = is_quasi_iso_in_range(f, 3)
    assert not v and v.failing_degree == 4


@settings(max_examples=40)
@given(A=dgas())
def test_random_dgas_are_valid(A):
    assert validate(A) == []
    for n in range(8):
        d = A.d_columns(n)
        # d∘d = 0 on the whole degree-n basis
        for col in d:
            x = A.algebra.from_vector(col, n + 1)
            assert A.d(x) == 0


def test_random_dgas_are_not_all_formal():
    # the strategy does produce nonzero differentials
    from hypothesis import find

    A = find(dgas(), lambda A: any(A.images))
    assert any(A.images)
