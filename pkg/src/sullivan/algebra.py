"""Free graded-commutative algebras over the rationals.

A monomial is a tuple ``((gen_id, exponent), ...)`` sorted by generator id.
Odd generators square to zero, and reordering odd factors costs a sign.
The same :class:`Element` type is used for every algebra in the package; it
only needs the algebra to supply a basis per degree and a product on basis
keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from .errors import AlgebraError, AlgebraMismatch, DegreeError

Monomial = tuple  # tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Generator:
    id: int
    name: str
    degree: int

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise DegreeError(f"generator {self.name!r} needs a positive degree, got {self.degree!r}")

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class GradedBasis:
    degree: int
    monomials: tuple

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -- monomial arithmetic -----------------------------------------------------


def monomial_degree(m: Monomial, degrees: Sequence[int]) -> int:
    return sum(e * degrees[g] for g, e in m)


def canonical_monomial(factors: Iterable[tuple[int, int]], degrees: Sequence[int]) -> tuple[int, Monomial]:
    """Sort a product of generator powers written in any order.

    Returns ``(sign, monomial)``; the sign is 0 when an odd generator occurs
    twice.  Applying it to an already canonical monomial returns ``(1, m)``.
    """
    seen_odd: list[int] = []
    exps: dict[int, int] = {}
    sign = 1
    for g, e in factors:
        if e <= 0:
            raise AlgebraError(f"exponent must be positive, got {e}")
        if degrees[g] % 2:
            if e > 1 or g in exps:
                return 0, ()
            # every odd factor already placed with a larger id must be passed
            if sum(1 for h in seen_odd if h > g) % 2:
                sign = -sign
            seen_odd.append(g)
            exps[g] = 1
        else:
            exps[g] = exps.get(g, 0) + e
    return sign, tuple(sorted(exps.items()))


def multiply_monomials(m1: Monomial, m2: Monomial, degrees: Sequence[int]) -> tuple[int, Monomial]:
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    odd2 = [g for g, _ in m2 if degrees[g] % 2]
    sign = 1
    if odd2:
        ids2 = {g for g, _ in m2}
        flips = 0
        for g, _ in m1:
            if degrees[g] % 2:
                if g in ids2:
                    return 0, ()
                flips += sum(1 for h in odd2 if h < g)
        if flips % 2:
            sign = -1
    exps = dict(m1)
    for g, e in m2:
        exps[g] = exps.get(g, 0) + e
    return sign, tuple(sorted(exps.items()))


@lru_cache(maxsize=None)
def _monomials(degrees: tuple, start: int, n: int) -> tuple:
    if n == 0:
        return ((),)
    if start == len(degrees):
        return ()
    d = degrees[start]
    top = 1 if d % 2 else n // d
    out = []
    for e in range(min(top, n // d), -1, -1):
        for tail in _monomials(degrees, start + 1, n - e * d):
            out.append(((start, e),) + tail if e else tail)
    return tuple(out)


def basis_in_degree(generators: Sequence[Generator], n: int) -> GradedBasis:
    """All canonical monomials of degree ``n``.

    Ordered lexicographically by exponent vector, larger exponents of earlier
    generators first; degree 0 gives the unit monomial only.
    """
    if n < 0:
        return GradedBasis(n, ())
    ids = [g.id for g in generators]
    if ids != list(range(len(ids))):
        raise AlgebraError("generator ids must be 0..k-1 in order")
    return GradedBasis(n, _monomials(tuple(g.degree for g in generators), 0, n))


# -- elements ----------------------------------------------------------------


class Element:
    """A finite rational combination of basis keys of some graded algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "GradedAlgebra", terms=None):
        self.algebra = algebra
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[k] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean

    # arithmetic
    def _other(self, other) -> "Element":
        if isinstance(other, Element):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise AlgebraMismatch(f"cannot combine elements of {self.algebra!r} and {other.algebra!r}")
            return other
        if isinstance(other, (int, Rational)):
            return self.algebra.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, self._other(other))
        if isinstance(other, (int, Rational)):
            c = Fraction(other)
            return Element(self.algebra, {k: c * v for k, v in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            return self == self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # grading
    def degrees(self) -> set[int]:
        return {self.algebra.key_degree(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous element; ``None`` for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise DegreeError(f"element {self} is not homogeneous")
        return next(iter(ds))

    def part(self, n: int) -> "Element":
        kd = self.algebra.key_degree
        return Element(self.algebra, {k: c for k, c in self.terms.items() if kd(k) == n})

    def coefficient(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __str__(self):
        return self.algebra.format_element(self)

    def __repr__(self):
        return f"Element({self})"


def bar(x: Element) -> Element:
    """``(-1)^|x| x`` for homogeneous ``x``."""
    d = x.degree
    return -x if d is not None and d % 2 else x


# -- algebras ----------------------------------------------------------------


class GradedAlgebra:
    """Interface shared by free algebras and structure-constant algebras.

    Subclasses provide ``unit_key``, ``key_degree``, ``_compute_basis``,
    ``mul_keys`` and ``format_key``; ``top_degree`` is the largest degree
    with a nonzero piece, or ``None`` when infinite.
    """

    unit_key = None
    top_degree: int | None = None

    def __init__(self):
        self._bases: dict[int, tuple] = {}
        self._indices: dict[int, dict] = {}

    def key_degree(self, key) -> int:
        raise NotImplementedError

    def _compute_basis(self, n: int) -> tuple:
        raise NotImplementedError

    def mul_keys(self, k1, k2) -> Iterable[tuple[object, Fraction]]:
        raise NotImplementedError

    def format_key(self, key) -> str:
        raise NotImplementedError

    # cached basis data
    def basis(self, n: int) -> tuple:
        b = self._bases.get(n)
        if b is None:
            b = self._compute_basis(n) if n >= 0 else ()
            self._bases[n] = b
        return b

    def index(self, n: int) -> dict:
        ix = self._indices.get(n)
        if ix is None:
            ix = {k: i for i, k in enumerate(self.basis(n))}
            self._indices[n] = ix
        return ix

    def graded_basis(self, n: int) -> GradedBasis:
        return GradedBasis(n, self.basis(n))

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    # elements
    def element(self, terms) -> Element:
        return Element(self, terms)

    def zero(self) -> Element:
        return Element(self)

    def one(self) -> Element:
        return Element(self, {self.unit_key: 1})

    def scalar(self, c) -> Element:
        return Element(self, {self.unit_key: Fraction(c)})

    def basis_element(self, key) -> Element:
        return Element(self, {key: 1})

    def multiply(self, a: Element, b: Element) -> Element:
        if a.algebra != self or b.algebra != self:
            raise AlgebraMismatch("multiply: elements belong to a different algebra")
        out: dict = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                for k, c in self.mul_keys(k1, k2):
                    out[k] = out.get(k, 0) + c * c1 * c2
        return Element(self, out)

    def vector(self, x: Element, n: int) -> dict:
        """Sparse coordinates of ``x`` in the degree-``n`` basis."""
        ix = self.index(n)
        out = {}
        for k, c in x.terms.items():
            i = ix.get(k)
            if i is None:
                raise DegreeError(f"term {self.format_key(k)} of {x} is not of degree {n}")
            out[i] = c
        return out

    def from_vector(self, v: dict, n: int) -> Element:
        b = self.basis(n)
        return Element(self, {b[i]: c for i, c in v.items()})

    def format_element(self, x: Element) -> str:
        if not x.terms:
            return "0"

        def order(k):
            d = self.key_degree(k)
            return d, self.index(d).get(k, 0)

        parts = []
        for k in sorted(x.terms, key=order):
            c = x.terms[k]
            name = self.format_key(k)
            if name == "1":
                body = format_rational(abs(c))
            elif abs(c) == 1:
                body = name
            else:
                body = f"{format_rational(abs(c))}*{name}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


def coordinates(x: Element, basis: GradedBasis) -> list[Fraction]:
    """Dense coordinate column of homogeneous ``x`` in ``basis``."""
    if not x.is_homogeneous():
        raise DegreeError(f"{x} is not homogeneous")
    d = x.degree
    if d is not None and d != basis.degree:
        raise DegreeError(f"{x} has degree {d}, basis has degree {basis.degree}")
    pos = {k: i for i, k in enumerate(basis.monomials)}
    col = [Fraction(0)] * len(basis.monomials)
    for k, c in x.terms.items():
        if k not in pos:
            raise DegreeError(f"{x} has a term outside the basis")
        col[pos[k]] = c
    return col


def from_coordinates(algebra: GradedAlgebra, column: Sequence, basis: GradedBasis) -> Element:
    return Element(algebra, {k: c for k, c in zip(basis.monomials, column) if c})


class FreeAlgebra(GradedAlgebra):
    """``base ⊗ Λ(generators)`` with ``base`` a finite-dimensional graded algebra.

    With ``base=None`` the keys are plain monomials; otherwise they are pairs
    ``(base_key, monomial)`` standing for ``base_key · monomial``.
    """

    def __init__(self, generators: Sequence, base: GradedAlgebra | None = None):
        super().__init__()
        gens = []
        for i, g in enumerate(generators):
            if isinstance(g, Generator):
                g = Generator(i, g.name, g.degree)
            else:
                name, degree = g
                g = Generator(i, name, degree)
            gens.append(g)
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.degrees = tuple(g.degree for g in gens)
        self.base = base
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate generator names in {names}")
        if base is not None:
            if base.top_degree is None:
                raise AlgebraError("the coefficient algebra must be finite dimensional")
            clash = set(names) & set(base.class_names())
            if clash:
                raise AlgebraError(f"generator names clash with base classes: {sorted(clash)}")
            self.unit_key = (base.unit_key, ())
        else:
            self.unit_key = ()
        self._by_name = {g.name: g for g in gens}
        self._signature = (tuple((g.name, g.degree) for g in gens), id(base) if base is not None else None)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FreeAlgebra) and self._signature == other._signature

    def __hash__(self):
        return hash(self._signature)

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        if self.base is not None:
            return f"FreeAlgebra({self.base!r} ⊗ Λ({gens}))"
        return f"FreeAlgebra(Λ({gens}))"

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def gen(self, name_or_id) -> Element:
        if isinstance(name_or_id, int):
            g = self.generators[name_or_id]
        else:
            g = self.generator(name_or_id)
        m = ((g.id, 1),)
        return Element(self, {(self.base.unit_key, m) if self.base is not None else m: 1})

    def gens(self) -> list[Element]:
        return [self.gen(i) for i in range(len(self.generators))]

    def names(self) -> list[str]:
        out = [g.name for g in self.generators]
        if self.base is not None:
            out += list(self.base.class_names())
        return out

    def __getitem__(self, name: str) -> Element:
        if name in self._by_name:
            return self.gen(name)
        if self.base is not None and name in self.base.class_names():
            return self.lift(self.base[name])
        raise AlgebraError(f"unknown name {name!r}")

    def key_degree(self, key) -> int:
        if self.base is None:
            return monomial_degree(key, self.degrees)
        b, m = key
        return self.base.key_degree(b) + monomial_degree(m, self.degrees)

    def monomials(self, n: int) -> tuple:
        if n < 0:
            return ()
        return _monomials(self.degrees, 0, n)

    def _compute_basis(self, n: int) -> tuple:
        if self.base is None:
            return self.monomials(n)
        out = []
        for j in range(min(n, self.base.top_degree), -1, -1):
            bks = self.base.basis(j)
            if not bks:
                continue
            ms = self.monomials(n - j)
            out.extend((b, m) for b in bks for m in ms)
        return tuple(out)

    def mul_keys(self, k1, k2):
        if self.base is None:
            s, m = multiply_monomials(k1, k2, self.degrees)
            return [(m, s)] if s else []
        b1, m1 = k1
        b2, m2 = k2
        s, m = multiply_monomials(m1, m2, self.degrees)
        if not s:
            return []
        if monomial_degree(m1, self.degrees) % 2 and self.base.key_degree(b2) % 2:
            s = -s
        return [((b, m), s * c) for b, c in self.base.mul_keys(b1, b2)]

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for g, e in m:
            name = self.generators[g].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def format_key(self, key) -> str:
        if self.base is None:
            return self.format_monomial(key)
        b, m = key
        parts = []
        if b != self.base.unit_key:
            parts.append(self.base.format_key(b))
        if m:
            parts.append(self.format_monomial(m))
        return "*".join(parts) if parts else "1"

    def monomial_of(self, key) -> Monomial:
        return key if self.base is None else key[1]

    # moving elements between related algebras
    def lift(self, x: Element) -> Element:
        """Include an element of the coefficient algebra."""
        if self.base is None or x.algebra != self.base:
            raise AlgebraMismatch("lift needs an element of the coefficient algebra")
        return Element(self, {(k, ()): c for k, c in x.terms.items()})

    def is_extension_of(self, other: "FreeAlgebra") -> bool:
        n = len(other.generators)
        return (
            isinstance(other, FreeAlgebra)
            and other.base is self.base
            and self._signature[0][:n] == other._signature[0]
        )

    def coerce(self, x: Element) -> Element:
        """Bring ``x`` into this algebra along a generator-prefix inclusion."""
        if x.algebra == self:
            return x if x.algebra is self else Element(self, x.terms)
        if self.base is not None and x.algebra == self.base:
            return self.lift(x)
        if isinstance(x.algebra, FreeAlgebra) and self.is_extension_of(x.algebra):
            return Element(self, x.terms)
        raise AlgebraMismatch(f"cannot coerce an element of {x.algebra!r} into {self!r}")

    def extend(self, new_generators: Sequence[tuple[str, int]]) -> "FreeAlgebra":
        gens = [(g.name, g.degree) for g in self.generators] + [tuple(g) for g in new_generators]
        return FreeAlgebra(gens, base=self.base)
