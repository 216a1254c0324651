import pytest

from sullivan import constructions as C, pd
from sullivan.audit import audit_theorem_lefschetz, audit_theorem_miller
from sullivan.errors import DegreeError, NotClosed


def test_sphere_fails_the_betti_hypothesis():
    rep = audit_theorem_miller(pd.sphere(7), k=1)
    assert not rep.hypotheses_hold
    failed = [h.name for h in rep.hypotheses if not h.passed]
    assert failed == ["b_2 = 1"]
    assert rep.prediction is None and rep.consistent is None


def test_miller_instance_passes():
    rep = audit_theorem_miller(pd.product(pd.complex_projective(2, "a"), pd.sphere(3, "v")))
    assert rep.k == 1 and rep.dimension == 7
    assert rep.hypotheses_hold and rep.prediction == "formal" and rep.consistent
    assert rep.cross_check == {"massey_scan": 0, "s_formality": "witnessed-s-formal", "witnesses": 0}


def test_circle_bundle_miller_instance():
    label, X = C.miller_instances()[-1]
    rep = audit_theorem_miller(X, instance=label)
    assert rep.instance == label
    assert rep.hypotheses_hold and rep.consistent


def test_sharp_long_dimension():
    X = C.sharp_example(1, 3)
    rep = audit_theorem_miller(X)
    assert rep.k == 1 and rep.dimension == 11
    assert [h.name for h in rep.hypotheses if not h.passed] == ["dimension"]
    assert rep.prediction is None
    assert rep.certified_nonformal


def test_sharp_b2_equals_two():
    # H³ = 0, so only φ = 0 is available: no Lefschetz class, no prediction, a Massey obstruction
    X = C.sharp_example(1, 1)
    assert X.betti(3) == 0
    rep = audit_theorem_lefschetz(X, 1, X.total.algebra.zero())
    assert [h.name for h in rep.hypotheses if not h.passed] == ["Lefschetz pairing"]
    assert rep.prediction is None and rep.certified_nonformal
    assert rep.cross_check["certifying_basis_classes"] == 0
    with pytest.raises(NotClosed):
        audit_theorem_lefschetz(X, 1, X.parse("tau"))


def test_parity_rejection():
    A = pd.connected_sum(
        pd.connected_sum(pd.product(pd.sphere(3, "x"), pd.sphere(8, "y")), pd.product(pd.sphere(3, "u"), pd.sphere(8, "v"))),
        pd.product(pd.sphere(3, "p"), pd.sphere(8, "q")),
    )
    assert pd.connectivity(A) == 2 and A.betti(3) == 3
    rep = audit_theorem_lefschetz(A, 2, pd.as_formal_dga(A).algebra.zero())
    pairing = next(h for h in rep.hypotheses if h.name == "Lefschetz pairing")
    assert not pairing.passed
    assert pairing.evidence == "no nondegenerate skew bilinear form in an odd dimensional vector space"
    assert rep.prediction is None


def test_b2_instances():
    for label, M, phi in C.lefschetz_b2_instances():
        rep = audit_theorem_lefschetz(M, 1, phi, instance=label)
        assert rep.theorem == "lefschetz-b2"
        assert rep.hypotheses_hold and rep.prediction == "formal" and rep.consistent, label


def test_b3_instance():
    M, phi = C.lefschetz_b3_instance()
    rep = audit_theorem_lefschetz(M, 1, phi)
    assert rep.theorem == "lefschetz-b3-massey"
    assert rep.hypotheses_hold
    assert rep.prediction == "massey-vanish"
    assert rep.cross_check["uniform_vanishing"] == "feasible"
    assert rep.cross_check["uniform_problems"] == 12
    assert rep.consistent and not rep.certified_nonformal


def test_seven_manifold_is_sharp():
    X = C.seven_manifold()
    rep = audit_theorem_lefschetz(X, 1, C.seven_manifold_phi(X))
    assert [h.name for h in rep.hypotheses if not h.passed] == ["b_2 in {2, 3}"]
    pairing = next(h for h in rep.hypotheses if h.name == "Lefschetz pairing")
    assert pairing.passed and "signature -4" in pairing.evidence
    assert rep.prediction is None and rep.consistent is None
    assert len(rep.massey_obstructions) == 16 and rep.certified_nonformal


def test_wrong_phi_degree():
    X = C.seven_manifold()
    with pytest.raises(DegreeError):
        audit_theorem_lefschetz(X, 1, X["omega"])


def test_degenerate_phi_voids_the_prediction():
    label, M, phi = C.lefschetz_b2_instances()[0]
    rep = audit_theorem_lefschetz(M, 1, 0 * phi)
    assert not rep.hypotheses_hold and rep.prediction is None
    # the auditor still reports basis classes that certify
    assert rep.cross_check["certifying_basis_classes"] >= 1
