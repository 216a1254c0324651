"""Hirsch extensions and the degree-by-degree minimal model of a DGA.

A stage ``M_k`` is free on generators of degree ``<= k`` with a map
``rho: M_k -> T`` that is an isomorphism on ``H^i`` for ``i <= k`` and
injective on ``H^(k+1)``.  The next stage adds, in degree ``k+1``,

* one ``B`` generator per class in ``ker(H^(k+2)(M_k) -> H^(k+2)(T))``, whose
  differential is that class, so the class dies;
* one ``Z`` generator per class of ``H^(k+1)(T)`` missing from the image,
  closed and mapped to a representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .algebra import Element, FreeAlgebra
from .dga import DGAMorphism, FreeCDGA, cohomology, is_quasi_iso_in_range, validate
from .errors import AlgebraError, DegreeError, InvariantViolation, NotClosed


@dataclass(frozen=True)
class HirschData:
    """New generators of one common degree ``k`` with closed images of degree ``k+1``."""

    new_generators: tuple  # (name, degree) pairs
    images: Mapping  # name -> Element of the base (or text)

    def degree(self) -> int | None:
        degs = {d for _, d in self.new_generators}
        if len(degs) > 1:
            raise DegreeError(f"Hirsch extension needs one common degree, got {sorted(degs)}")
        return degs.pop() if degs else None


def hirsch_extend(A: FreeCDGA, h: HirschData) -> FreeCDGA:
    """``A ⊗ Λ(V)`` with ``d v = h.images[v]``."""
    from .textpoly import element as parse_element

    k = h.degree()
    imgs = {}
    for name, _ in h.new_generators:
        img = h.images.get(name)
        if img is None:
            img = A.algebra.zero()
        elif isinstance(img, str):
            img = parse_element(A.algebra, img)
        else:
            img = A.algebra.coerce(img)
        if img and img.degree != k + 1:
            raise DegreeError(f"d{name} = {img} must have degree {k + 1}")
        if A.d(img):
            raise NotClosed(f"d{name} = {img} is not closed in the base")
        imgs[name] = img
    extra = set(h.images) - {n for n, _ in h.new_generators}
    if extra:
        raise AlgebraError(f"images given for unknown generators {sorted(extra)}")
    algebra = A.algebra.extend(h.new_generators)
    diff = {g.name: img for g, img in zip(A.generators, A.images)}
    diff.update(imgs)
    return FreeCDGA(algebra, diff, A.degree_cap)


def _as_target(target) -> FreeCDGA:
    from .pd import PDAlgebra, as_formal_dga

    if isinstance(target, PDAlgebra):
        return as_formal_dga(target)
    if isinstance(target, FreeCDGA):
        return target
    if hasattr(target, "total"):
        return target.total
    if hasattr(target, "dga"):
        return target.dga
    raise AlgebraError(f"cannot use {target!r} as a target DGA")


@dataclass(frozen=True)
class SullivanStage:
    stage_degree: int
    model: FreeCDGA
    rho: DGAMorphism
    split: Mapping = field(default_factory=dict)  # degree -> {"B": names, "Z": names}

    @property
    def target(self) -> FreeCDGA:
        return self.rho.target

    def b_generators(self, upto: int | None = None) -> list[str]:
        return [n for k, parts in sorted(self.split.items()) if upto is None or k <= upto for n in parts["B"]]

    def z_generators(self, upto: int | None = None) -> list[str]:
        return [n for k, parts in sorted(self.split.items()) if upto is None or k <= upto for n in parts["Z"]]

    def tag(self, name: str) -> str:
        for parts in self.split.values():
            for t in ("B", "Z"):
                if name in parts[t]:
                    return t
        return "?"

    def table(self) -> list[tuple[str, int, str, Element, Element]]:
        """Rows ``(name, degree, tag, d, rho)``."""
        return [
            (g.name, g.degree, self.tag(g.name), self.model.images[g.id], self.rho.images[g.id])
            for g in self.model.generators
        ]


def linear_part(x: Element) -> Element:
    """Terms of ``x`` that are a single generator (times a coefficient-algebra unit)."""
    A = x.algebra
    keep = {}
    for k, c in x.terms.items():
        m = A.monomial_of(k)
        base_unit = A.base is None or k[0] == A.base.unit_key
        if base_unit and len(m) == 1 and m[0][1] == 1:
            keep[k] = c
    return Element(A, keep)


def is_minimal(A: FreeCDGA) -> bool:
    return not any(linear_part(img) for img in A.images)


def initial_stage(target) -> SullivanStage:
    """Stage 1: the ground field, mapping to the unit."""
    T = _as_target(target)
    h0 = cohomology(T, 0).dimension
    h1 = cohomology(T, 1).dimension
    if h0 != 1 or h1 != 0:
        raise InvariantViolation(f"target needs H^0 = Q and H^1 = 0, got dims {h0} and {h1}")
    M = FreeCDGA(FreeAlgebra([]), {}, None)
    rho = DGAMorphism(M, T, {})
    return SullivanStage(1, M, rho, {})


def _induced_columns(f: DGAMorphism, n: int) -> list[dict]:
    # H^n(f) as sparse columns, one per source class
    tgt = cohomology(f.target, n)
    out = []
    for r in cohomology(f.source, n).class_representatives:
        out.append({i: c for i, c in enumerate(tgt.coordinates(f.apply(r))) if c})
    return out


def sullivan_step(stage: SullivanStage, target=None, verify: bool = True) -> SullivanStage:
    """Add the generators of degree ``stage.stage_degree + 1``."""
    T = _as_target(target) if target is not None else stage.target
    M, rho = stage.model, stage.rho
    k = stage.stage_degree + 1
    # classes of H^(k+1)(M) that die in T
    src = cohomology(M, k + 1)
    kill = linalg.kernel(_induced_columns(rho, k + 1))
    # classes of H^k(T) not yet hit
    tgt = cohomology(T, k)
    image = _induced_columns(rho, k)
    units = [{i: Fraction(1)} for i in range(tgt.dimension)]
    new = [units[i] for i in linalg.independent_subset(units, modulo=image)]

    gens, dimg, rimg = [], {}, {}
    bnames, znames = [], []
    for i, v in enumerate(kill):
        name = f"b{k}_{i + 1}"
        x = src.element([v.get(j, 0) for j in range(src.dimension)])
        y = T.algebra.zero()
        fx = rho.apply(x)
        if fx:
            sol = linalg.solve(T.d_columns(k), T.algebra.vector(fx, k + 1))
            if sol is None:
                raise InvariantViolation(f"class {x} is in the kernel but its image is not exact")
            y = T.algebra.from_vector(sol, k)
        gens.append((name, k))
        dimg[name] = x
        rimg[name] = y
        bnames.append(name)
    for i, v in enumerate(new):
        name = f"z{k}_{i + 1}"
        gens.append((name, k))
        rimg[name] = tgt.element([v.get(j, 0) for j in range(tgt.dimension)])
        znames.append(name)

    M2 = hirsch_extend(M, HirschData(tuple(gens), dimg)) if gens else M
    images = {g.name: img for g, img in zip(M.generators, rho.images)}
    images.update(rimg)
    rho2 = DGAMorphism(M2, T, images, check=verify)
    split = dict(stage.split)
    split[k] = {"B": tuple(bnames), "Z": tuple(znames)}
    out = SullivanStage(k, M2, rho2, split)
    if verify:
        verify_stage(out)
    return out


def verify_stage(stage: SullivanStage) -> None:
    """Raise :class:`InvariantViolation` unless the stage invariants hold."""
    bad = validate(stage.model)
    if bad:
        raise InvariantViolation("; ".join(map(str, bad)))
    if not is_minimal(stage.model):
        raise InvariantViolation("a generator has a linear differential")
    verdict = is_quasi_iso_in_range(stage.rho, stage.stage_degree)
    if not verdict:
        raise InvariantViolation(f"stage {stage.stage_degree}: {verdict.reason}")


def build_minimal_model(target, up_to: int, verify: bool = True) -> list[SullivanStage]:
    """Stages ``2 .. up_to`` of the minimal model of ``target``."""
    if up_to < 2:
        raise DegreeError("up_to must be at least 2")
    stage = initial_stage(target)
    out = []
    while stage.stage_degree < up_to:
        stage = sullivan_step(stage, verify=verify)
        out.append(stage)
    return out


def minimal_model(target, up_to: int) -> SullivanStage:
    return build_minimal_model(target, up_to)[-1]


# -- s-formality -----------------------------------------------------------


@dataclass
class SFormalityReport:
    s: int
    degree_cap: int
    ideal_closed_basis: list
    non_exact_witnesses: list
    verdict: str  # witnessed-s-formal | obstructed | inconclusive
    target_classes: list = field(default_factory=list)  # ρ-image coordinates per witness


def _ideal_keys(A: FreeAlgebra, n: int, ids: set[int]) -> list:
    return [k for k in A.basis(n) if any(g in ids for g, _ in A.monomial_of(k))]


def check_s_formality_witness(stages: Sequence[SullivanStage], s: int, degree_cap: int) -> SFormalityReport:
    """Closed elements of the ideal generated by the B generators of degree
    ``<= s``, tested for exactness in the model truncated at ``degree_cap``."""
    need = max(s, degree_cap - 1)
    by_degree = {st.stage_degree: st for st in stages}
    top = max(by_degree) if by_degree else 1
    if top < need:
        raise DegreeError(f"stages reach degree {top}, need {need}")
    full = by_degree[need] if need in by_degree else by_degree[top]
    small = by_degree.get(s) or next(st for st in sorted(stages, key=lambda st: st.stage_degree) if st.stage_degree >= s)
    Ms = small.model
    ids = {Ms.algebra.generator(n).id for n in full.b_generators(upto=s)}
    Mfull = full.model.with_cap(None)
    closed_all, witnesses, targets = [], [], []
    for n in range(degree_cap + 1):
        keys = _ideal_keys(Ms.algebra, n, ids)
        if not keys:
            continue
        cols = [Ms.algebra.vector(Ms.d(Element(Ms.algebra, {k: 1})), n + 1) for k in keys]
        closed = [Element(Ms.algebra, {keys[i]: c for i, c in v.items()}) for v in linalg.kernel(cols)]
        if not closed:
            continue
        closed = [Mfull.algebra.coerce(x) for x in closed]
        closed_all += closed
        H = cohomology(Mfull, n)
        coords = [{i: c for i, c in enumerate(H.coordinates(x)) if c} for x in closed]
        for i in linalg.independent_subset(coords):
            witnesses.append(closed[i])
    if not witnesses:
        verdict = "witnessed-s-formal"
    else:
        T = full.target
        for w in witnesses:
            img = full.rho.apply(w)
            targets.append(cohomology(T, w.degree).coordinates(img))
        verdict = "obstructed" if any(any(t) for t in targets) else "inconclusive"
    return SFormalityReport(s, degree_cap, closed_all, witnesses, verdict, targets)
