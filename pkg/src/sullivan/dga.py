"""Differentials on free CDGAs, cohomology and induced maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .algebra import Element, FreeAlgebra, GradedAlgebra, format_rational
from .errors import (
    AlgebraError,
    AlgebraMismatch,
    DegreeCapExceeded,
    DegreeError,
    NotClosed,
)
from .textpoly import element as parse_element


class FreeCDGA:
    """A free graded-commutative algebra (possibly over a finite coefficient
    algebra with zero differential) together with ``d`` on its generators.

    ``differential`` maps generator names to their images; missing
    generators are closed.  Images may be given as text.
    """

    def __init__(
        self,
        algebra: FreeAlgebra,
        differential: Mapping[str, Element | str] | None = None,
        degree_cap: int | None = None,
    ):
        self.algebra = algebra
        self.degree_cap = degree_cap
        images = []
        differential = dict(differential or {})
        for g in algebra.generators:
            img = differential.pop(g.name, None)
            if img is None:
                img = algebra.zero()
            elif isinstance(img, str):
                img = parse_element(algebra, img)
            else:
                img = algebra.coerce(img)
            if img and (not img.is_homogeneous() or img.degree != g.degree + 1):
                raise DegreeError(f"d{g.name} = {img} must be homogeneous of degree {g.degree + 1}")
            images.append(img)
        if differential:
            raise AlgebraError(f"differential given for unknown generators {sorted(differential)}")
        self.images: tuple[Element, ...] = tuple(images)
        self._dkey: dict = {}
        self._dcols: dict[int, list] = {}
        self._coh: dict[int, CohomologyReport] = {}

    @classmethod
    def build(cls, generators, differential=None, base=None, degree_cap=None) -> "FreeCDGA":
        """``FreeCDGA.build([("a", 2), ("b", 3)], {"b": "a^2"})``."""
        return cls(FreeAlgebra(generators, base=base), differential, degree_cap)

    def __repr__(self):
        parts = [f"{g.name}:{g.degree}" for g in self.algebra.generators]
        ds = [f"d{g.name}={img}" for g, img in zip(self.algebra.generators, self.images) if img]
        base = f"{self.algebra.base!r} ⊗ " if self.algebra.base is not None else ""
        return f"FreeCDGA({base}Λ({', '.join(parts)}); {', '.join(ds) or 'd=0'})"

    def __getitem__(self, name):
        return self.algebra[name]

    @property
    def generators(self):
        return self.algebra.generators

    def d_of(self, name: str) -> Element:
        return self.images[self.algebra.generator(name).id]

    def with_cap(self, cap: int | None) -> "FreeCDGA":
        out = FreeCDGA.__new__(FreeCDGA)
        out.__dict__.update(self.__dict__)
        out.degree_cap = cap
        return out

    # -- d -------------------------------------------------------------------
    def _d_monomial(self, m) -> Element:
        A = self.algebra
        hit = self._dkey.get(m)
        if hit is not None:
            return hit
        if not m:
            out = A.zero()
        else:
            g, e = m[0]
            rest = ((g, e - 1),) + m[1:] if e > 1 else m[1:]
            unit_b = A.base.unit_key if A.base is not None else None
            key = lambda mm: mm if A.base is None else (unit_b, mm)
            gen = Element(A, {key(((g, 1),)): 1})
            tail = Element(A, {key(rest): 1})
            out = self.images[g] * tail
            dt = self._d_monomial(rest)
            if dt:
                sign = -1 if A.degrees[g] % 2 else 1
                out = out + sign * (gen * dt)
        self._dkey[m] = out
        return out

    def _d_key(self, key) -> Element:
        A = self.algebra
        if A.base is None:
            return self._d_monomial(key)
        b, m = key
        dm = self._d_monomial(m)
        if not dm:
            return dm
        bel = Element(A, {(b, ()): 1})
        sign = -1 if A.base.key_degree(b) % 2 else 1
        return sign * (bel * dm)

    def d(self, x: Element) -> Element:
        if x.algebra != self.algebra:
            x = self.algebra.coerce(x)
        out: dict = {}
        for k, c in x.terms.items():
            for k2, c2 in self._d_key(k).terms.items():
                out[k2] = out.get(k2, 0) + c * c2
        return Element(self.algebra, out)

    def d_columns(self, n: int) -> list:
        """Images of the degree-``n`` basis as sparse vectors in degree ``n+1``."""
        cols = self._dcols.get(n)
        if cols is None:
            A = self.algebra
            cols = [A.vector(self._d_key(k), n + 1) for k in A.basis(n)]
            self._dcols[n] = cols
        return cols

    def check_cap(self, n: int):
        if self.degree_cap is not None and n > self.degree_cap:
            raise DegreeCapExceeded(f"degree {n} exceeds the cap {self.degree_cap}")

    def cohomology(self, n: int) -> "CohomologyReport":
        return cohomology(self, n)

    def is_closed(self, x: Element) -> bool:
        return not self.d(x)


def differential(x: Element, A: FreeCDGA) -> Element:
    return A.d(x)


@dataclass(frozen=True)
class Violation:
    generator: str
    problem: str
    element: Element | None = None

    def __str__(self):
        tail = f": {self.element}" if self.element is not None else ""
        return f"{self.generator}: {self.problem}{tail}"


def validate(A: FreeCDGA) -> list[Violation]:
    """Empty iff ``d`` has degree +1 on generators and ``d² = 0``."""
    out = []
    for g, img in zip(A.algebra.generators, A.images):
        if img and (not img.is_homogeneous() or img.degree != g.degree + 1):
            out.append(Violation(g.name, "differential has the wrong degree", img))
            continue
        dd = A.d(img)
        if dd:
            out.append(Violation(g.name, "d² ≠ 0", dd))
    return out


@dataclass
class CohomologyReport:
    degree: int
    dimension: int
    cocycle_basis: list
    coboundary_basis: list
    class_representatives: list
    _solver: linalg.Echelon = field(repr=False, default=None)
    _exact: linalg.Echelon = field(repr=False, default=None)
    _algebra: GradedAlgebra = field(repr=False, default=None)

    def coordinates(self, x: Element) -> list[Fraction]:
        """Coordinates of the class of cocycle ``x`` in ``class_representatives``."""
        if not x:
            return [Fraction(0)] * self.dimension
        v = self._algebra.vector(x, self.degree)
        rem, combo = self._solver.reduce(v)
        if rem:
            raise NotClosed(f"{x} is not a cocycle in degree {self.degree}")
        nb = len(self.coboundary_basis)
        return [-combo.get(nb + i, Fraction(0)) for i in range(self.dimension)]

    def is_exact(self, x: Element) -> bool:
        if not x:
            return True
        return self._exact.contains(self._algebra.vector(x, self.degree))

    def element(self, coords: Sequence) -> Element:
        out = self._algebra.zero()
        for c, r in zip(coords, self.class_representatives):
            if c:
                out = out + c * r
        return out


def cohomology(A: FreeCDGA, n: int) -> CohomologyReport:
    """``H^n`` by exact elimination; representatives are RREF cocycles
    chosen greedily modulo the coboundaries."""
    A.check_cap(n)
    hit = A._coh.get(n)
    if hit is not None:
        return hit
    alg = A.algebra
    if n < 0:
        rep = CohomologyReport(n, 0, [], [], [], linalg.Echelon(track=True), linalg.Echelon(), alg)
        A._coh[n] = rep
        return rep
    z = linalg.kernel(A.d_columns(n))
    b_ech = linalg.image_echelon(A.d_columns(n - 1)) if n > 0 else linalg.Echelon()
    b = b_ech.reduced_basis()
    picked = linalg.independent_subset(z, modulo=b)
    reps = [z[i] for i in picked]
    solver = linalg.Echelon(track=True)
    for v in b + reps:
        solver.add(v)
    report = CohomologyReport(
        degree=n,
        dimension=len(reps),
        cocycle_basis=[alg.from_vector(v, n) for v in z],
        coboundary_basis=[alg.from_vector(v, n) for v in b],
        class_representatives=[alg.from_vector(v, n) for v in reps],
        _solver=solver,
        _exact=b_ech,
        _algebra=alg,
    )
    A._coh[n] = report
    return report


def betti_numbers(A: FreeCDGA, upto: int) -> list[int]:
    return [cohomology(A, j).dimension for j in range(upto + 1)]


class DGAMorphism:
    """An algebra map given on generators, checked to commute with ``d``.

    A source over a coefficient algebra maps it identically, so the target
    must be over the same coefficient algebra (or be that algebra wrapped
    as a formal DGA).
    """

    def __init__(self, source: FreeCDGA, target, generator_images: Mapping[str, Element | str] | Sequence, check: bool = True):
        from .pd import PDAlgebra, as_formal_dga

        if isinstance(target, PDAlgebra):
            target = as_formal_dga(target)
        self.source = source
        self.target = target
        T = target.algebra
        if not isinstance(generator_images, Mapping):
            generator_images = {g.name: img for g, img in zip(source.generators, generator_images)}
        imgs = []
        for g in source.generators:
            img = generator_images.get(g.name)
            if img is None:
                img = T.zero()
            elif isinstance(img, str):
                img = parse_element(T, img)
            elif isinstance(img, (int, Fraction)):
                img = T.scalar(img)
            else:
                img = T.coerce(img)
            if img and img.degree != g.degree:
                raise DegreeError(f"image of {g.name} has degree {img.degree}, expected {g.degree}")
            imgs.append(img)
        self.images: tuple[Element, ...] = tuple(imgs)
        sb = source.algebra.base
        if sb is not None and T.base is not sb:
            raise AlgebraMismatch("a source over a coefficient algebra needs a target over the same one")
        self._cache: dict = {}
        if check:
            for g, img in zip(source.generators, imgs):
                lhs = self.apply(source.d_of(g.name))
                rhs = target.d(img)
                if lhs != rhs:
                    raise AlgebraError(f"morphism does not commute with d on {g.name}: {lhs} vs {rhs}")

    def _apply_monomial(self, m) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        out = self.target.algebra.one()
        for g, e in m:
            out = out * (self.images[g] ** e)
        self._cache[m] = out
        return out

    def apply(self, x: Element) -> Element:
        S = self.source.algebra
        T = self.target.algebra
        if x.algebra != S:
            x = S.coerce(x)
        total = T.zero()
        for k, c in x.terms.items():
            if S.base is None:
                img = self._apply_monomial(k)
            else:
                b, m = k
                img = T.lift(S.base.basis_element(b)) * self._apply_monomial(m)
            total = total + c * img
        return total

    __call__ = apply

    def compose(self, inner: "DGAMorphism") -> "DGAMorphism":
        """``self ∘ inner``."""
        imgs = {g.name: self.apply(img) for g, img in zip(inner.source.generators, inner.images)}
        return DGAMorphism(inner.source, self.target, imgs)

    @classmethod
    def identity(cls, A: FreeCDGA) -> "DGAMorphism":
        return cls(A, A, {g.name: A.algebra.gen(g.name) for g in A.generators})


def induced_map(f: DGAMorphism, n: int) -> list[list[Fraction]]:
    """Matrix of ``H^n(f)`` (rows: target classes, columns: source classes)."""
    src = cohomology(f.source, n)
    tgt = cohomology(f.target, n)
    cols = [tgt.coordinates(f.apply(r)) for r in src.class_representatives]
    return [[cols[j][i] for j in range(len(cols))] for i in range(tgt.dimension)]


def _matrix_rank(m: list[list[Fraction]]) -> int:
    return linalg.dense_rank(m) if m and m[0] else 0


@dataclass(frozen=True)
class QuasiIsoVerdict:
    passed: bool
    failing_degree: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.passed


def is_quasi_iso_in_range(f: DGAMorphism, up_to: int) -> QuasiIsoVerdict:
    """Isomorphism on ``H^i`` for ``i <= up_to`` and injective on ``H^(up_to+1)``."""
    for i in range(up_to + 2):
        m = induced_map(f, i)
        ds = cohomology(f.source, i).dimension
        dt = cohomology(f.target, i).dimension
        r = _matrix_rank(m)
        if i <= up_to and not (r == ds == dt):
            return QuasiIsoVerdict(False, i, f"H^{i}: rank {r}, source {ds}, target {dt}")
        if i == up_to + 1 and r != ds:
            return QuasiIsoVerdict(False, i, f"H^{i} not injective: rank {r}, source {ds}")
    return QuasiIsoVerdict(True)


@dataclass(frozen=True)
class Integration:
    """A linear functional on the top degree, given by its values on basis keys."""

    algebra: GradedAlgebra
    dimension: int
    weights: Mapping

    def __call__(self, x: Element) -> Fraction:
        if x.algebra != self.algebra:
            raise AlgebraMismatch("integration applied to a foreign element")
        total = Fraction(0)
        for k, c in x.terms.items():
            w = self.weights.get(k)
            if w:
                total += c * w
        return total


def format_matrix(m) -> str:
    return "[" + "; ".join(" ".join(format_rational(x) for x in row) for row in m) + "]"
