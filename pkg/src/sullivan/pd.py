"""Finite-dimensional graded algebras with a fundamental class.

Cohomology rings are entered by structure constants: a basis of named
classes per degree, the product of every pair of positive-degree classes,
and the value of the fundamental functional on the top-degree classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .algebra import Element, FreeAlgebra, GradedAlgebra
from .dga import FreeCDGA, Integration, cohomology
from .errors import AlgebraError, DegreeError, NotClosed, PDValidationError
from .textpoly import element as parse_element, parse_polynomial


@dataclass(frozen=True)
class PDViolation:
    kind: str  # duality | associativity | sign-rule | missing-product | degree | unit
    where: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.kind} failure at {self.where}: {self.detail}"


class PDAlgebra(GradedAlgebra):
    """A Poincaré duality algebra of formal dimension ``dimension``.

    ``products`` maps pairs of class names to combinations of classes
    (``{name: coeff}`` or text).  A pair given in one order fixes the other by
    graded commutativity.  Unless ``default_zero`` is set, every pair of
    positive-degree classes whose degrees add to at most ``dimension`` must
    be listed.
    """

    unit_key = "1"

    def __init__(
        self,
        dimension: int,
        classes: Sequence[tuple[str, int]],
        products: Mapping,
        top: Mapping[str, object],
        default_zero: bool = False,
        name: str = "",
        check: bool = True,
    ):
        super().__init__()
        self.dimension = dimension
        self.top_degree = dimension
        self.name = name
        all_classes = [("1", 0)] + [(c, int(d)) for c, d in classes]
        names = [c for c, _ in all_classes]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate class names in {names}")
        self._deg = dict(all_classes)
        self._by_degree: dict[int, list[str]] = {}
        for c, d in all_classes:
            if d < 0 or d > dimension:
                raise DegreeError(f"class {c} has degree {d} outside [0, {dimension}]")
            if d == 0 and c != "1":
                raise DegreeError(f"class {c}: degree 0 is spanned by the unit")
            self._by_degree.setdefault(d, []).append(c)
        self.default_zero = default_zero
        self.top = {c: Fraction(v) for c, v in top.items()}
        for c in self.top:
            if self._deg.get(c) != dimension:
                raise DegreeError(f"fundamental functional given on {c}, which is not a top-degree class")
        self._table: dict[tuple[str, str], dict[str, Fraction]] = {}
        self._given: set[tuple[str, str]] = set()
        self._problems: list[PDViolation] = []
        for (a, b), val in products.items():
            self._set_product(a, b, val)
        self._fill_commutative()
        if check:
            bad = self.violations()
            if bad:
                raise PDValidationError(bad)

    def __repr__(self):
        return f"PDAlgebra({self.name or '?'}, n={self.dimension})"

    # -- construction helpers ------------------------------------------------
    def _parse_value(self, val) -> dict[str, Fraction]:
        if isinstance(val, str):
            val = _linear_terms(val)
        elif isinstance(val, Element):
            val = val.terms
        return {k: Fraction(c) for k, c in val.items() if c}

    def _set_product(self, a, b, val):
        for c in (a, b):
            if c not in self._deg:
                raise AlgebraError(f"unknown class {c!r} in product table")
        if a == "1" or b == "1":
            raise AlgebraError("products with the unit are implicit")
        terms = self._parse_value(val)
        d = self._deg[a] + self._deg[b]
        for k in terms:
            if self._deg.get(k) != d:
                self._problems.append(PDViolation("degree", (a, b), f"{k} is not of degree {d}"))
        if d > self.dimension and terms:
            self._problems.append(PDViolation("degree", (a, b), "product above the top degree"))
        if (a, b) in self._given:
            if self._table[(a, b)] != terms:
                self._problems.append(PDViolation("sign-rule", (a, b), "product listed twice with different values"))
            return
        self._given.add((a, b))
        self._table[(a, b)] = terms

    def _fill_commutative(self):
        for (a, b) in sorted(self._given):
            s = -1 if self._deg[a] % 2 and self._deg[b] % 2 else 1
            swapped = {k: s * c for k, c in self._table[(a, b)].items()}
            if (b, a) in self._given:
                if self._table[(b, a)] != swapped:
                    self._problems.append(
                        PDViolation("sign-rule", (a, b), f"{b}·{a} must equal {'-' if s < 0 else ''}{a}·{b}")
                    )
            else:
                self._table[(b, a)] = swapped
        pos = [c for c, d in self._deg.items() if d > 0]
        for a in pos:
            for b in pos:
                if self._deg[a] + self._deg[b] > self.dimension:
                    continue
                if (a, b) not in self._table:
                    if not self.default_zero and (a, b) <= (b, a):
                        self._problems.append(PDViolation("missing-product", (a, b), "not specified"))
                    self._table[(a, b)] = {}

    # -- GradedAlgebra interface -----------------------------------------------
    def key_degree(self, key) -> int:
        return self._deg[key]

    def _compute_basis(self, n):
        return tuple(self._by_degree.get(n, ()))

    def mul_keys(self, k1, k2):
        if k1 == "1":
            return [(k2, Fraction(1))]
        if k2 == "1":
            return [(k1, Fraction(1))]
        if self._deg[k1] + self._deg[k2] > self.dimension:
            return []
        return list(self._table.get((k1, k2), {}).items())

    def format_key(self, key) -> str:
        return key

    def class_names(self) -> list[str]:
        return [c for c in self._deg if c != "1"]

    def __getitem__(self, name: str) -> Element:
        if name not in self._deg:
            raise AlgebraError(f"unknown class {name!r}")
        return self.basis_element(name)

    def parse(self, text: str) -> Element:
        return parse_element(self, text)

    def classes(self, degree: int | None = None) -> list[str]:
        if degree is None:
            return self.class_names()
        return list(self.basis(degree))

    def betti(self, j: int) -> int:
        return len(self.basis(j))

    def product_table(self) -> dict[tuple[str, str], dict[str, Fraction]]:
        return {k: dict(v) for k, v in self._table.items()}

    # -- checks --------------------------------------------------------------
    def pairing_matrix(self, j: int) -> list[list[Fraction]]:
        rows = self.basis(j)
        cols = self.basis(self.dimension - j)
        return [[integrate(self[a] * self[b], self) for b in cols] for a in rows]

    def violations(self) -> list[PDViolation]:
        out = list(self._problems)
        n = self.dimension
        if self.betti(n) == 0:
            out.append(PDViolation("duality", (n,), "no top-degree class"))
        pos = [c for c, d in self._deg.items() if d > 0]
        for a, b, c in itertools.product(pos, repeat=3):
            if self._deg[a] + self._deg[b] + self._deg[c] > n:
                continue
            lhs = (self[a] * self[b]) * self[c]
            rhs = self[a] * (self[b] * self[c])
            if lhs != rhs:
                out.append(PDViolation("associativity", (a, b, c), f"({a}{b}){c} = {lhs} but {a}({b}{c}) = {rhs}"))
        for j in range(n + 1):
            dj, dk = self.betti(j), self.betti(n - j)
            m = self.pairing_matrix(j)
            r = linalg.dense_rank(m) if dj and dk else 0
            if not (dj == dk == r):
                out.append(PDViolation("duality", (j, n - j), f"pairing rank {r} with b_{j}={dj}, b_{n - j}={dk}"))
        return out

    # -- formal DGA view -----------------------------------------------------
    def formal_dga(self) -> FreeCDGA:
        return as_formal_dga(self)

    def integration(self) -> Integration:
        A = as_formal_dga(self)
        return Integration(A.algebra, self.dimension, {(c, ()): v for c, v in self.top.items()})

    def oriented(self) -> "OrientedModel":
        return OrientedModel(as_formal_dga(self), self.integration(), self.name)


def _linear_terms(text: str) -> dict[str, Fraction]:
    # table values are linear combinations of classes, so no algebra is needed to read them
    out: dict[str, Fraction] = {}
    for c, factors in parse_polynomial(text):
        if len(factors) > 1 or (factors and factors[0][1] != 1):
            raise AlgebraError(f"product table value {text!r} must be linear in the classes")
        key = factors[0][0] if factors else "1"
        out[key] = out.get(key, 0) + c
    return out


@dataclass(frozen=True)
class OrientedModel:
    """A DGA with an integration on its top degree."""

    dga: FreeCDGA
    integration: Integration
    name: str = ""

    @property
    def dimension(self) -> int:
        return self.integration.dimension

    def coerce(self, x) -> Element:
        if isinstance(x, str):
            return parse_element(self.dga.algebra, x)
        return self.dga.algebra.coerce(x)


def oriented(A) -> OrientedModel:
    if isinstance(A, OrientedModel):
        return A
    return A.oriented()


def load_pd_algebra(description) -> PDAlgebra:
    """Build a :class:`PDAlgebra` from a mapping or from a ``pd`` block of task text.

    Mapping keys: ``dimension``, ``classes`` (pairs), ``products``
    (``{(a, b): value}``), ``top``, optional ``default_zero`` and ``name``.
    """
    if isinstance(description, str):
        from .cli import parse

        tf = parse(description)
        pds = [d for d in tf.declarations if d.__class__.__name__ == "PDDecl"]
        if len(pds) != 1:
            raise AlgebraError("expected exactly one pd block")
        return pds[0].build()
    d = dict(description)
    return PDAlgebra(
        d["dimension"],
        d["classes"],
        d.get("products", {}),
        d["top"],
        default_zero=d.get("default_zero", False),
        name=d.get("name", ""),
    )


def integrate(x: Element, A: PDAlgebra) -> Fraction:
    """``∫x``: the fundamental functional on the degree-n part, zero below."""
    total = Fraction(0)
    for k, c in x.terms.items():
        w = A.top.get(k)
        if w:
            total += c * w
    return total


def connectivity(A) -> int:
    """Largest ``k`` with ``H^i = 0`` for ``1 <= i <= k`` (top degree excluded)."""
    om = oriented(A)
    n = om.dimension
    k = 0
    for i in range(1, n):
        if cohomology(om.dga, i).dimension:
            break
        k = i
    return k


def betti(A, j: int) -> int:
    if isinstance(A, PDAlgebra):
        return A.betti(j)
    return cohomology(oriented(A).dga, j).dimension


def as_formal_dga(A: PDAlgebra) -> FreeCDGA:
    """``A`` with zero differential, usable as a morphism target."""
    hit = A.__dict__.get("_formal")
    if hit is None:
        hit = FreeCDGA(FreeAlgebra([], base=A))
        A._formal = hit
    return hit


@dataclass
class LefschetzCertificate:
    phi: Element
    k: int
    classes: list
    pairing_matrix: list
    nondegenerate: bool
    symmetric: bool
    signature: int | None = None


def lefschetz_check(A, k: int, phi) -> LefschetzCertificate:
    """Matrix of ``(x, y) ↦ ∫ φ x y`` on ``H^(k+1)`` and its verdict.

    ``A`` is a :class:`PDAlgebra`, a bundle model, or any oriented model.
    """
    om = oriented(A)
    n = om.dimension
    phi = om.coerce(phi)
    want = n - 2 * k - 2
    if phi and phi.degree != want:
        raise DegreeError(f"phi must have degree {want}, got {phi.degree}")
    if om.dga.d(phi):
        raise NotClosed(f"phi = {phi} is not closed")
    reps = cohomology(om.dga, k + 1).class_representatives
    m = [[om.integration(phi * x * y) for y in reps] for x in reps]
    r = linalg.dense_rank(m) if m else 0
    symmetric = (k + 1) % 2 == 0
    sig = None
    if symmetric:
        p, q, _ = linalg.inertia(m) if m else (0, 0, 0)
        sig = p - q
    return LefschetzCertificate(phi, k, reps, m, r == len(reps), symmetric, sig)


def scan_lefschetz_candidates(A, k: int) -> list[LefschetzCertificate]:
    """Certificates for each basis class of degree ``n-2k-2`` that certifies."""
    om = oriented(A)
    deg = om.dimension - 2 * k - 2
    out = []
    for rep in cohomology(om.dga, deg).class_representatives if deg >= 0 else []:
        cert = lefschetz_check(om, k, rep)
        if cert.nondegenerate:
            out.append(cert)
    return out


# -- Wall invariants -------------------------------------------------------


@dataclass(frozen=True)
class WallViolation:
    congruence: str  # "mod2" | "mod24" | "h3-rank"
    where: tuple
    lhs: int
    rhs: int

    def __str__(self):
        return f"{self.congruence} violated at {self.where}: {self.lhs} vs {self.rhs}"


@dataclass
class WallVerdict:
    passed: bool
    violations: list = field(default_factory=list)
    checked: int = 0


@dataclass
class WallData:
    """Integral data ``(H², rank H³, μ, p₁)`` on a basis of named classes."""

    classes: tuple
    h3_rank: int
    mu: dict  # sorted index triple -> int
    p1: dict  # class -> int

    @classmethod
    def from_table(cls, classes, mu, p1, h3_rank=0) -> "WallData":
        """``mu`` maps triples of class names (any order, or as ``"a b c"``) to integers.

        Triples not listed are zero.
        """
        classes = tuple(classes)
        ix = {c: i for i, c in enumerate(classes)}
        table = {}
        for key, v in mu.items():
            names = key.split() if isinstance(key, str) else key
            t = tuple(sorted(ix[c] for c in names))
            if len(t) != 3:
                raise AlgebraError(f"mu needs triples, got {key!r}")
            if t in table and table[t] != int(v):
                raise AlgebraError(f"mu{key} listed twice with different values")
            table[t] = int(v)
        return cls(classes, h3_rank, table, {c: int(p1.get(c, 0)) for c in classes})

    @classmethod
    def from_pd(cls, A: PDAlgebra, p1: Element | str | None = None) -> "WallData":
        h2 = A.classes(2)
        if isinstance(p1, str):
            p1 = A.parse(p1)
        mu = {}
        for t in itertools.combinations_with_replacement(range(len(h2)), 3):
            v = integrate(A[h2[t[0]]] * A[h2[t[1]]] * A[h2[t[2]]], A)
            if v.denominator != 1:
                raise AlgebraError(f"mu{t} = {v} is not an integer")
            if v:
                mu[t] = int(v)
        p = {}
        for c in h2:
            v = integrate(p1 * A[c], A) if p1 is not None else Fraction(0)
            if v.denominator != 1:
                raise AlgebraError(f"p1({c}) = {v} is not an integer")
            p[c] = int(v)
        return cls(tuple(h2), A.betti(3), mu, p)

    def mu_value(self, i, j, k) -> int:
        return self.mu.get(tuple(sorted((i, j, k))), 0)

    def cubic(self, x: Sequence[int]) -> int:
        idx = [i for i, c in enumerate(x) if c]
        return sum(x[i] * x[j] * x[k] * self.mu_value(i, j, k) for i in idx for j in idx for k in idx)

    def p1_value(self, x: Sequence[int]) -> int:
        return sum(c * self.p1[self.classes[i]] for i, c in enumerate(x))

    def label(self, x: Sequence[int]) -> str:
        return " + ".join(self.classes[i] if c == 1 else f"{c}*{self.classes[i]}" for i, c in enumerate(x) if c)


def validate_wall(w: WallData) -> WallVerdict:
    """Check the mod-2 rule on basis pairs and the mod-24 rule on basis
    vectors and on all sums of two or three distinct basis vectors."""
    out = []
    checked = 0
    r = len(w.classes)
    if w.h3_rank % 2:
        out.append(WallViolation("h3-rank", (w.h3_rank,), w.h3_rank, 0))
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            checked += 1
            a, b = w.mu_value(i, i, j), w.mu_value(i, j, j)
            if (a - b) % 2:
                out.append(WallViolation("mod2", (w.classes[i], w.classes[j]), a, b))
    vectors = []
    for size in (1, 2, 3):
        for combo in itertools.combinations(range(r), size):
            vectors.append(tuple(1 if i in combo else 0 for i in range(r)))
    for x in vectors:
        checked += 1
        p, m = w.p1_value(x), 4 * w.cubic(x)
        if (p - m) % 24:
            out.append(WallViolation("mod24", (w.label(x),), p, m))
    return WallVerdict(not out, out, checked)


def pd_from_wall(w: WallData, top_name: str = "vol") -> PDAlgebra:
    """The rational cohomology ring of the spin 6-manifold with invariants ``w``.

    ``H⁴`` gets the basis dual to ``H²`` (class ``x_dual`` pairs to 1 with
    ``x``); ``H³`` gets a symplectic basis ``x3_i, y3_i``.
    """
    h2 = list(w.classes)
    duals = [f"{c}_dual" for c in h2]
    h3 = []
    for i in range(w.h3_rank // 2):
        h3 += [f"x3_{i + 1}", f"y3_{i + 1}"]
    classes = [(c, 2) for c in h2] + [(c, 3) for c in h3] + [(c, 4) for c in duals] + [(top_name, 6)]
    products = {}
    for i, a in enumerate(h2):
        for j in range(i, len(h2)):
            products[(a, h2[j])] = {duals[k]: w.mu_value(i, j, k) for k in range(len(h2)) if w.mu_value(i, j, k)}
        for k, dk in enumerate(duals):
            products[(a, dk)] = {top_name: 1} if i == k else {}
    for i in range(0, len(h3), 2):
        products[(h3[i], h3[i + 1])] = {top_name: 1}
    return PDAlgebra(6, classes, products, {top_name: 1}, default_zero=True, name="wall")


# -- standard algebras and operations ---------------------------------------


def point() -> PDAlgebra:
    return PDAlgebra(0, [], {}, {"1": 1}, name="pt")


def sphere(n: int, name: str | None = None) -> PDAlgebra:
    if n < 1:
        raise DegreeError("sphere dimension must be positive")
    c = name or f"s{n}"
    return PDAlgebra(n, [(c, n)], {}, {c: 1}, name=f"S{n}")


def complex_projective(m: int, name: str = "a", degree: int = 2) -> PDAlgebra:
    """``H*(CP^m)`` (or ``HP^m`` with ``degree=4``) on powers of ``name``."""
    pw = lambda j: "1" if j == 0 else (name if j == 1 else f"{name}{j}")
    classes = [(pw(j), degree * j) for j in range(1, m + 1)]
    products = {}
    for i in range(1, m + 1):
        for j in range(i, m + 1 - i):
            products[(pw(i), pw(j))] = {pw(i + j): 1}
    label = "CP" if degree == 2 else ("HP" if degree == 4 else "P")
    return PDAlgebra(degree * m, classes, products, {pw(m): 1}, default_zero=True, name=f"{label}{m}")


def quaternionic_projective(m: int, name: str = "q") -> PDAlgebra:
    return complex_projective(m, name=name, degree=4)


def _renamer(prefix: str):
    return lambda c: c if c == "1" or not prefix else f"{prefix}{c}"


def product(A: PDAlgebra, B: PDAlgebra, separator: str = ".") -> PDAlgebra:
    """Künneth product; class ``a⊗b`` is named ``a.b`` (or ``a`` / ``b`` next to the unit)."""

    def nm(a, b):
        if a == "1":
            return b
        if b == "1":
            return a
        return f"{a}{separator}{b}"

    pairs = [(a, b) for da in range(A.dimension + 1) for a in A.basis(da) for db in range(B.dimension + 1) for b in B.basis(db)]
    # within a degree, classes with more of their degree in the first factor come first
    pairs.sort(key=lambda p: (A.key_degree(p[0]) + B.key_degree(p[1]), -A.key_degree(p[0])))
    classes = [(nm(a, b), A.key_degree(a) + B.key_degree(b)) for a, b in pairs if (a, b) != ("1", "1")]
    n = A.dimension + B.dimension
    products = {}
    for (a, b), (a2, b2) in itertools.product(pairs, repeat=2):
        if (a, b) == ("1", "1") or (a2, b2) == ("1", "1"):
            continue
        if A.key_degree(a) + B.key_degree(b) + A.key_degree(a2) + B.key_degree(b2) > n:
            continue
        s = -1 if B.key_degree(b) % 2 and A.key_degree(a2) % 2 else 1
        val = {}
        for x, cx in A.mul_keys(a, a2):
            for y, cy in B.mul_keys(b, b2):
                val[nm(x, y)] = val.get(nm(x, y), 0) + s * cx * cy
        products[(nm(a, b), nm(a2, b2))] = val
    top = {nm(a, b): A.top[a] * B.top[b] for a in A.top for b in B.top}
    label = f"{A.name}x{B.name}" if A.name and B.name else ""
    return PDAlgebra(n, classes, products, top, name=label)


def connected_sum(A: PDAlgebra, B: PDAlgebra, prefixes: tuple[str, str] = ("", "")) -> PDAlgebra:
    """``A # B``: units and fundamental classes identified, cross products zero."""
    if A.dimension != B.dimension:
        raise DegreeError(f"connected sum of dimensions {A.dimension} and {B.dimension}")
    n = A.dimension
    if n == 0:
        raise DegreeError("connected sum needs positive dimension")
    ra, rb = _renamer(prefixes[0]), _renamer(prefixes[1])
    top_a, top_b = A.basis(n), B.basis(n)
    if len(top_a) != 1 or len(top_b) != 1:
        raise PDValidationError([PDViolation("duality", (n,), "summands need a one-dimensional top degree")])
    vol = ra(top_a[0])
    classes = []
    for X, r in ((A, ra), (B, rb)):
        for j in range(1, n):
            classes += [(r(c), j) for c in X.basis(j)]
    classes.append((vol, n))
    products = {}
    for X, r in ((A, ra), (B, rb)):
        t = X.basis(n)[0]
        lam = X.top[t]
        middle = [c for j in range(1, n) for c in X.basis(j)]
        for a in middle:
            for b in middle:
                if X.key_degree(a) + X.key_degree(b) > n:
                    continue
                val = {}
                for k, c in X.mul_keys(a, b):
                    key, cc = (vol, c * lam) if k == t else (r(k), c)
                    val[key] = val.get(key, 0) + cc
                products[(r(a), r(b))] = val
    name = f"{A.name}#{B.name}" if A.name and B.name else ""
    return PDAlgebra(n, classes, products, {vol: 1}, default_zero=True, name=name)
