"""Check the formality theorems on concrete instances.

An audit records each hypothesis with its evidence.  When all hypotheses
hold it states the prediction (``formal`` or ``massey-vanish``) and runs an
independent computation to confirm it.  A failed hypothesis yields no
prediction; only a Massey certificate ever supports non-formality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import pd
from .dga import cohomology
from .errors import DegreeError
from .massey import all_defined_triples, scan_all_triples, solve_uniform_vanishing
from .minimal_model import build_minimal_model, check_s_formality_witness


@dataclass
class Hypothesis:
    name: str
    passed: bool
    evidence: str


@dataclass
class AuditReport:
    instance: str
    theorem: str  # miller-extended | lefschetz-b2 | lefschetz-b3-massey
    k: int
    dimension: int
    hypotheses: list = field(default_factory=list)
    prediction: str | None = None
    cross_check: dict = field(default_factory=dict)
    consistent: bool | None = None
    massey_obstructions: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return all(h.passed for h in self.hypotheses)

    @property
    def certified_nonformal(self) -> bool:
        return bool(self.massey_obstructions)


def _scan(om, k: int, parallel=False):
    n = om.dimension
    return scan_all_triples(om, (k + 1, n - k - 1), parallel=parallel)


def _formality_cross_check(model, k: int, n: int, report: AuditReport, scan) -> bool:
    s = 2 * k + 1
    stages = build_minimal_model(model, max(s, n - 1, 2))
    sf = check_s_formality_witness(stages, s, n)
    report.cross_check["s_formality"] = sf.verdict
    report.cross_check["witnesses"] = len(sf.non_exact_witnesses)
    report.cross_check["massey_scan"] = len(scan)
    return sf.verdict == "witnessed-s-formal" and not scan


def audit_theorem_miller(A, k: int | None = None, instance: str = "", parallel: bool = False) -> AuditReport:
    """k-connected, dimension ``4k+3`` or ``4k+4``, ``b_(k+1) = 1`` ⇒ formal."""
    om = pd.oriented(A)
    n = om.dimension
    conn = pd.connectivity(om)
    k = conn if k is None else k
    b = cohomology(om.dga, k + 1).dimension
    rep = AuditReport(instance or om.name, "miller-extended", k, n)
    rep.hypotheses = [
        Hypothesis("k-connected", conn >= k and k >= 1, f"connectivity {conn}"),
        Hypothesis("dimension", n in (4 * k + 3, 4 * k + 4), f"n = {n}, need {4 * k + 3} or {4 * k + 4}"),
        Hypothesis(f"b_{k + 1} = 1", b == 1, f"b_{k + 1} = {b}"),
    ]
    scan = _scan(om, k, parallel)
    rep.massey_obstructions = scan
    rep.cross_check["massey_scan"] = len(scan)
    if rep.hypotheses_hold:
        rep.prediction = "formal"
        rep.consistent = _formality_cross_check(om.dga, k, n, rep, scan)
    return rep


def audit_theorem_lefschetz(A, k: int, phi, instance: str = "", parallel: bool = False) -> AuditReport:
    """k-connected of dimension ``4k+3``/``4k+4`` with ``φ·: H^(k+1) ≅ H^(n-k-1)``:
    ``b_(k+1) = 2`` ⇒ formal; ``n = 4k+3`` and ``b_(k+1) = 3`` ⇒ uniformly vanishing Massey products."""
    om = pd.oriented(A)
    n = om.dimension
    phi = om.coerce(phi)
    want = n - 2 * k - 2
    if phi and phi.degree != want:
        raise DegreeError(f"phi must have degree {want}, got {phi.degree}")
    conn = pd.connectivity(om)
    b = cohomology(om.dga, k + 1).dimension
    cert = pd.lefschetz_check(om, k, phi)
    theorem = "lefschetz-b3-massey" if b == 3 else "lefschetz-b2"
    rep = AuditReport(instance or om.name, theorem, k, n)
    hyps = [
        Hypothesis("k-connected", conn >= k and k >= 1, f"connectivity {conn}"),
        Hypothesis("dimension", n in (4 * k + 3, 4 * k + 4), f"n = {n}"),
        Hypothesis(f"b_{k + 1} in {{2, 3}}", b in (2, 3), f"b_{k + 1} = {b}"),
    ]
    if not cert.symmetric and b % 2:
        hyps.append(
            Hypothesis(
                "Lefschetz pairing",
                False,
                "no nondegenerate skew bilinear form in an odd dimensional vector space",
            )
        )
    else:
        sig = f", signature {cert.signature}" if cert.signature is not None else ""
        hyps.append(Hypothesis("Lefschetz pairing", cert.nondegenerate, f"nondegenerate = {cert.nondegenerate}{sig}"))
    if b == 3:
        hyps.append(Hypothesis("n = 4k+3", n == 4 * k + 3, f"n = {n}"))
    rep.hypotheses = hyps
    rep.cross_check["pairing_matrix"] = cert.pairing_matrix
    rep.cross_check["certifying_basis_classes"] = len(pd.scan_lefschetz_candidates(om, k)) if want >= 0 else 0
    scan = _scan(om, k, parallel)
    rep.massey_obstructions = scan
    rep.cross_check["massey_scan"] = len(scan)
    if not rep.hypotheses_hold:
        return rep
    if b == 2:
        rep.prediction = "formal"
        rep.consistent = _formality_cross_check(om.dga, k, n, rep, scan)
    else:
        rep.prediction = "massey-vanish"
        problems = all_defined_triples(om, k + 1)
        shifts = [phi] + list(cohomology(om.dga, 2 * k + 1).cocycle_basis)
        sol = solve_uniform_vanishing(om, problems, shifts)
        rep.cross_check["uniform_problems"] = len(problems)
        rep.cross_check["uniform_vanishing"] = "feasible" if sol is not None else "infeasible"
        rep.consistent = sol is not None
    return rep
