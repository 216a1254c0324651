"""Models of sphere and circle bundles over Poincaré duality algebras, and
the example families used by the audits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, pd
from .algebra import Element, FreeAlgebra
from .dga import FreeCDGA, Integration, cohomology, validate
from .errors import AlgebraError, DegreeError
from .pd import OrientedModel, PDAlgebra, WallData


@dataclass(frozen=True)
class BundleModel:
    """``base ⊗ Λ(τ)`` with ``dτ`` the Euler (or Chern) class.

    Integration: ``∫ τ·x = ∫_base x`` for ``x`` of top base degree.
    """

    base: PDAlgebra
    fiber_kind: str  # "sphere" | "circle"
    fiber_dim: int
    euler_or_chern: Element
    total: FreeCDGA
    integration: Integration
    generator: str
    name: str = ""

    @property
    def dimension(self) -> int:
        return self.base.dimension + self.fiber_dim

    def oriented(self) -> OrientedModel:
        return OrientedModel(self.total, self.integration, self.name)

    def __getitem__(self, name: str) -> Element:
        return self.total.algebra[name]

    def parse(self, text: str) -> Element:
        from .textpoly import element

        return element(self.total.algebra, text)

    def pullback(self, x: Element) -> Element:
        return self.total.algebra.lift(x)

    @property
    def tau(self) -> Element:
        return self.total.algebra.gen(self.generator)

    def betti(self, j: int) -> int:
        return cohomology(self.total, j).dimension

    def betti_numbers(self) -> list[int]:
        return [self.betti(j) for j in range(self.dimension + 1)]


def _bundle(base: PDAlgebra, f: int, cls, kind: str, name: str, label: str) -> BundleModel:
    if isinstance(cls, str):
        cls = base.parse(cls)
    elif not isinstance(cls, Element) or cls.algebra is not base:
        raise AlgebraError("the bundle class must be an element of the base")
    if cls and cls.degree != f + 1:
        raise DegreeError(f"class {cls} has degree {cls.degree}, the fiber needs degree {f + 1}")
    alg = FreeAlgebra([(name, f)], base=base)
    total = FreeCDGA(alg, {name: alg.lift(cls)})
    n = base.dimension
    tau = ((0, 1),)
    sign = -1 if (n * f) % 2 else 1
    # key (b, τ) stands for b·τ = (-1)^(|b| f) τ·b
    weights = {(b, tau): sign * w for b, w in base.top.items()}
    integ = Integration(alg, n + f, weights)
    return BundleModel(base, kind, f, cls, total, integ, name, label)


def sphere_bundle_model(base: PDAlgebra, fiber_dim: int, euler, name: str = "tau", label: str = "") -> BundleModel:
    """Model of the unit sphere bundle of a rank ``fiber_dim + 1`` vector bundle."""
    if fiber_dim < 1 or fiber_dim % 2 == 0:
        raise DegreeError(f"fiber dimension must be odd, got {fiber_dim}")
    return _bundle(base, fiber_dim, euler, "sphere", name, label)


def circle_bundle_model(base: PDAlgebra, chern, name: str = "theta", label: str = "") -> BundleModel:
    return _bundle(base, 1, chern, "circle", name, label)


def product_with_sphere(base: PDAlgebra, m: int, name: str | None = None) -> PDAlgebra:
    if m < 1:
        raise DegreeError("sphere dimension must be positive")
    return pd.product(base, pd.sphere(m, name))


def gysin_ranks(model: BundleModel) -> list[int]:
    """Betti numbers of the total space predicted from cup-with-class ranks on the base."""
    B, e, f = model.base, model.euler_or_chern, model.fiber_dim
    N = model.dimension

    def mult_rank(j):
        # rank of e· : B^j -> B^(j+f+1)
        if j < 0 or j > B.dimension:
            return 0
        cols = [B.vector(e * B[c] if c != "1" else e, j + f + 1) for c in B.basis(j)]
        return linalg.rank(cols)

    out = []
    for j in range(N + 1):
        coker = B.betti(j) - mult_rank(j - f - 1) if 0 <= j <= B.dimension else 0
        src = j - f
        ker = B.betti(src) - mult_rank(src) if 0 <= src <= B.dimension else 0
        out.append(coker + ker)
    return out


def integration_kills_coboundaries(model) -> bool:
    om = pd.oriented(model)
    A = om.dga
    N = om.dimension
    return all(om.integration(A.algebra.from_vector(col, N)) == 0 for col in A.d_columns(N - 1))


def check_bundle(model: BundleModel) -> list[str]:
    """Problems with a bundle model (empty when it is sound)."""
    out = [str(v) for v in validate(model.total)]
    if not integration_kills_coboundaries(model):
        out.append("integration does not vanish on coboundaries")
    if gysin_ranks(model) != model.betti_numbers():
        out.append(f"Betti numbers {model.betti_numbers()} disagree with Gysin ranks {gysin_ranks(model)}")
    return out


# -- example data -------------------------------------------------------------

SEVEN_MANIFOLD_CLASSES = ("omega", "alpha1", "alpha2", "alpha3", "gamma")

# every monomial of degree 3 in the five classes; zero entries included so the table is visibly exhaustive
SEVEN_MANIFOLD_MU = {
    "omega alpha1 alpha1": 2, "omega alpha2 alpha2": 2, "omega alpha3 alpha3": 2,
    "omega alpha1 alpha2": 0, "omega alpha1 alpha3": 0, "omega alpha2 alpha3": 0,
    "omega gamma alpha1": 0, "omega gamma alpha2": 0, "omega gamma alpha3": 0,
    "omega gamma gamma": 0, "omega omega alpha1": 0, "omega omega alpha2": 0,
    "omega omega alpha3": 0, "omega omega gamma": 0, "omega omega omega": 2,
    "alpha1 alpha2 alpha2": 0, "alpha1 alpha2 alpha3": 0, "alpha1 alpha2 gamma": 0,
    "alpha1 alpha3 alpha3": 0, "alpha1 alpha3 gamma": 2, "alpha1 gamma gamma": 0,
    "alpha1 alpha1 alpha2": 0, "alpha1 alpha1 alpha3": 0, "alpha1 alpha1 gamma": 0,
    "alpha1 alpha1 alpha1": 0, "alpha2 alpha3 alpha3": 2, "alpha2 alpha3 gamma": 0,
    "alpha2 gamma gamma": 2, "alpha2 alpha2 alpha3": 0, "alpha2 alpha2 gamma": 2,
    "alpha2 alpha2 alpha2": 0, "alpha3 gamma gamma": 0, "alpha3 alpha3 gamma": 0,
    "alpha3 alpha3 alpha3": 0, "gamma gamma gamma": 0,
}


def seven_manifold_wall_data(p1_omega: int = 8) -> WallData:
    """Spin 6-manifold data with ``p1 = 4 ω²`` (so ``p1(ω) = 4·μ(ω,ω,ω) = 8``)."""
    p1 = {c: 0 for c in SEVEN_MANIFOLD_CLASSES}
    p1["omega"] = p1_omega
    return WallData.from_table(SEVEN_MANIFOLD_CLASSES, SEVEN_MANIFOLD_MU, p1, h3_rank=0)


def seven_manifold_base() -> PDAlgebra:
    return pd.pd_from_wall(seven_manifold_wall_data())


def seven_manifold() -> BundleModel:
    """Circle bundle with Chern class γ over the Wall base above."""
    return circle_bundle_model(seven_manifold_base(), "gamma", label="X7")


def seven_manifold_phi(X: BundleModel) -> Element:
    # γω = 0 already in the cohomology ring, so θω is closed as it stands
    return -X.parse("theta*omega")


def sphere_product(k1: int, k2: int, names=("w1", "w2")) -> PDAlgebra:
    return pd.product(pd.sphere(k1 + 1, names[0]), pd.sphere(k2 + 1, names[1]))


def sharp_example(k1: int, k2: int, euler_multiple=1) -> BundleModel:
    """Sphere bundle over ``S^(k1+1) × S^(k2+1)`` whose Euler class is ``e`` times the top class."""
    if (k1 + k2) % 2:
        raise DegreeError("k1 + k2 must be even")
    base = sphere_product(k1, k2)
    e = Fraction(euler_multiple)
    return sphere_bundle_model(base, k1 + k2 + 1, e * base["w1.w2"], label=f"sharp({k1},{k2})")


# -- instance families ---------------------------------------------------------


def miller_instances() -> list[tuple[str, object]]:
    """k-connected instances (k = 1, 2) of dimension 4k+3 or 4k+4 with ``b_(k+1) = 1``."""
    S, P, cs, x = pd.sphere, pd.complex_projective, pd.connected_sum, pd.product
    out = [
        ("S2xS5", x(S(2, "u"), S(5, "v"))),
        ("CP2xS3", x(P(2, "a"), S(3, "v"))),
        ("(S2xS5)#(S3xS4)", cs(x(S(2, "u"), S(5, "v")), x(S(3, "p"), S(4, "q")))),
        ("(CP2xS3)#(S3xS4)", cs(x(P(2, "a"), S(3, "v")), x(S(3, "p"), S(4, "q")))),
        ("CP4", P(4, "a")),
        ("S2xS6", x(S(2, "u"), S(6, "v"))),
        ("CP2xS4", x(P(2, "a"), S(4, "v"))),
        ("CP4#(S4xS4)", cs(P(4, "a"), x(S(4, "p"), S(4, "q")))),
        ("(S2xS6)#(S3xS5)", cs(x(S(2, "u"), S(6, "v")), x(S(3, "p"), S(5, "q")))),
        ("CP4#HP2", cs(P(4, "a"), pd.quaternionic_projective(2, "h"))),
        ("S3xS8", x(S(3, "u"), S(8, "v"))),
        ("(S3xS8)#(S5xS6)", cs(x(S(3, "u"), S(8, "v")), x(S(5, "p"), S(6, "q")))),
        ("S3xS9", x(S(3, "u"), S(9, "v"))),
        ("(S3xS9)#(S6xS6)", cs(x(S(3, "u"), S(9, "v")), x(S(6, "p"), S(6, "q")))),
    ]
    base = x(P(2, "a"), S(2, "b"))
    out.append(("circle over CP2xS2, c1 = a + b", circle_bundle_model(base, "a + b", label="S1->CP2xS2")))
    return out


def lefschetz_b2_instances() -> list[tuple[str, object, Element]]:
    """7-dimensional, 1-connected models with ``b_2 = 2`` and a certifying 3-class φ."""
    out = []
    S, P = pd.sphere, pd.complex_projective
    bases = [
        ("S2xS2", pd.product(S(2, "u"), S(2, "v"))),
        ("CP2#CP2", pd.connected_sum(P(2, "a"), P(2, "b"), ("", ""))),
        ("CP2#-CP2", pd.connected_sum(P(2, "a"), _reversed_cp2("b"))),
    ]
    for label, B in bases:
        M = sphere_bundle_model(B, 3, B.zero(), label=f"S3 x {label}")
        out.append((f"trivial S3-bundle over {label}", M, M.tau))
    for label, tail in (("A", (0, 2, 0, 2)), ("B", (2, 0, 2, 0)), ("C", (2, 2, 2, 4))):
        X = circle_bundle_model(pd.pd_from_wall(_b2_wall(tail)), "gamma", label=f"wall-{label}")
        out.append((f"circle bundle over Wall base {label}", X, -X.parse("theta*omega")))
    return out


def _reversed_cp2(name: str) -> PDAlgebra:
    # CP2 with the opposite orientation: a^2 integrates to -1
    return PDAlgebra(4, [(name, 2), (f"{name}2", 4)], {(name, name): {f"{name}2": 1}}, {f"{name}2": -1}, name="-CP2")


def _b2_wall(tail) -> WallData:
    aaa, aag, agg, ggg = tail
    mu = {
        "omega omega omega": 2, "omega omega alpha": 0, "omega alpha alpha": 2,
        "omega omega gamma": 0, "omega alpha gamma": 0, "omega gamma gamma": 0,
        "alpha alpha alpha": aaa, "alpha alpha gamma": aag, "alpha gamma gamma": agg, "gamma gamma gamma": ggg,
    }
    classes = ("omega", "alpha", "gamma")
    return WallData.from_table(classes, mu, {})


def lefschetz_b3_instance() -> tuple[BundleModel, Element]:
    """Trivial S³-bundle over CP²#CP²#CP²: 7-dimensional, 1-connected, ``b_2 = 3``, φ = τ."""
    P = pd.complex_projective
    B = pd.connected_sum(pd.connected_sum(P(2, "e1"), P(2, "e2")), P(2, "e3"))
    M = sphere_bundle_model(B, 3, B.zero(), label="S3 x 3CP2")
    return M, M.tau
