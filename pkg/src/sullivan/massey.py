"""Triple Massey products.

Convention: ``x̄ = (-1)^|x| x``.  For closed ``a12, a23, a34`` choose
``d a13 = ā12·a23`` and ``d a24 = ā23·a34``; the product is the class of
``ā12·a24 + ā13·a34`` modulo ``[a12]·H + H·[a34]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from . import linalg
from .algebra import Element, bar
from .dga import FreeCDGA, cohomology
from .errors import AlgebraError, DegreeError, MasseyUndefined, NotClosed
from .textpoly import element as parse_element


def _ambient(A):
    """``(dga, integration or None)`` for a DGA, PD algebra, bundle or oriented model."""
    if isinstance(A, FreeCDGA):
        return A, None
    om = A.oriented() if hasattr(A, "oriented") else A
    return om.dga, om.integration


def _element(A: FreeCDGA, x) -> Element:
    if isinstance(x, str):
        return parse_element(A.algebra, x)
    return A.algebra.coerce(x)


def solve_primitive(A: FreeCDGA, x: Element) -> Element | None:
    """Some ``y`` with ``dy = x``, or ``None`` when ``x`` is not exact."""
    A, _ = _ambient(A)
    x = _element(A, x)
    if not x:
        return A.algebra.zero()
    m = x.degree
    if A.d(x):
        raise NotClosed(f"{x} is not closed")
    A.check_cap(m)
    if m == 0:
        return None
    sol = linalg.solve(A.d_columns(m - 1), A.algebra.vector(x, m))
    if sol is None:
        return None
    return A.algebra.from_vector(sol, m - 1)


def _check_closed(A: FreeCDGA, x: Element, label: str):
    if x and not x.is_homogeneous():
        raise DegreeError(f"{label} = {x} is not homogeneous")
    if A.d(x):
        raise NotClosed(f"{label} = {x} is not closed")


def _deg(x: Element, fallback: int | None = None) -> int:
    if x:
        return x.degree
    if fallback is None:
        raise DegreeError("a zero entry needs an explicit degree")
    return fallback


@dataclass
class MasseyProblem:
    """Closed ``a12, a23, a34`` with primitives ``a13, a24``.

    ``slots`` names the two primitives so that several problems can share
    a choice (used by :func:`solve_uniform_vanishing`).
    """

    ambient: FreeCDGA
    a12: Element
    a23: Element
    a34: Element
    a13: Element
    a24: Element
    slots: tuple = (None, None)
    degrees: tuple = ()

    def __post_init__(self):
        A = self.ambient
        for label in ("a12", "a23", "a34", "a13", "a24"):
            setattr(self, label, _element(A, getattr(self, label)))
        for label in ("a12", "a23", "a34"):
            _check_closed(A, getattr(self, label), label)
        if not self.degrees:
            self.degrees = tuple(_deg(x) for x in (self.a12, self.a23, self.a34))
        if A.d(self.a13) != bar(self.a12) * self.a23:
            raise AlgebraError("d a13 must equal ā12·a23")
        if A.d(self.a24) != bar(self.a23) * self.a34:
            raise AlgebraError("d a24 must equal ā23·a34")

    @classmethod
    def build(cls, A, a12, a23, a34, degrees=None, slots=(None, None)) -> "MasseyProblem":
        A, _ = _ambient(A)
        a12, a23, a34 = (_element(A, x) for x in (a12, a23, a34))
        for label, x in (("a12", a12), ("a23", a23), ("a34", a34)):
            _check_closed(A, x, label)
        p = solve_primitive(A, bar(a12) * a23)
        q = solve_primitive(A, bar(a23) * a34)
        if p is None or q is None:
            which = "[a12][a23]" if p is None else "[a23][a34]"
            raise MasseyUndefined(f"undefined product: {which} is not zero in cohomology")
        return cls(A, a12, a23, a34, p, q, slots, tuple(degrees or ()))

    @property
    def degree(self) -> int:
        d1, d2, d3 = self.degrees
        return d1 + d2 + d3 - 1

    def representative(self) -> Element:
        return bar(self.a12) * self.a24 + bar(self.a13) * self.a34

    def shifted(self, s13: Element | None = None, s24: Element | None = None) -> "MasseyProblem":
        """The same problem with primitives moved by closed elements."""
        A = self.ambient
        a13 = self.a13 + _element(A, s13) if s13 is not None else self.a13
        a24 = self.a24 + _element(A, s24) if s24 is not None else self.a24
        return MasseyProblem(A, self.a12, self.a23, self.a34, a13, a24, self.slots, self.degrees)

    def shift_effect(self, s13: Element | None = None, s24: Element | None = None) -> Element:
        """Change of the representative when the primitives move by ``s13, s24``."""
        out = self.ambient.algebra.zero()
        if s13 is not None:
            out = out + bar(_element(self.ambient, s13)) * self.a34
        if s24 is not None:
            out = out + bar(self.a12) * _element(self.ambient, s24)
        return out

    def shift_spaces(self) -> tuple[list, list]:
        """Cocycle bases in the degrees of ``a13`` and ``a24``."""
        d1, d2, d3 = self.degrees
        A = self.ambient
        return cohomology(A, d1 + d2 - 1).cocycle_basis, cohomology(A, d2 + d3 - 1).cocycle_basis


@dataclass
class PairingWitness:
    z: Element
    value: Fraction
    certified: bool
    table: list = field(default_factory=list)  # (class representative, value) per basis class


@dataclass
class MasseyResult:
    problem: MasseyProblem
    representative: Element
    degree: int
    class_coordinates: list
    indeterminacy_basis: list
    vanishes: bool
    pairing_witness: PairingWitness | None = None
    labels: tuple = ()

    @property
    def indeterminacy_dimension(self) -> int:
        return len(self.indeterminacy_basis)


def _indeterminacy(A: FreeCDGA, a12: Element, a34: Element, degrees, m) -> tuple[list, linalg.Echelon]:
    d1, _, d3 = degrees
    H = cohomology(A, m)
    ech = linalg.Echelon()
    gens = []
    if m - d1 >= 0:
        gens += [a12 * h for h in cohomology(A, m - d1).class_representatives]
    if m - d3 >= 0:
        gens += [h * a34 for h in cohomology(A, m - d3).class_representatives]
    for g in gens:
        v = {i: c for i, c in enumerate(H.coordinates(g)) if c}
        ech.add(v)
    basis = [H.element([v.get(i, 0) for i in range(H.dimension)]) for v in ech.reduced_basis()]
    return basis, ech


def _pairing(problem: MasseyProblem, rep: Element, integration, m: int) -> PairingWitness | None:
    A = problem.ambient
    q = integration.dimension - m
    if q < 0:
        return None
    zs = cohomology(A, q).class_representatives
    if not zs:
        return None
    values = [integration(rep * z) for z in zs]
    sh13, sh24 = problem.shift_spaces()
    deltas = [problem.shift_effect(s13=s) for s in sh13] + [problem.shift_effect(s24=s) for s in sh24]
    # rows: shifts, columns: basis classes z_j
    dmat = [[integration(dl * z) for z in zs] for dl in deltas]
    table = list(zip(zs, values))
    for j, z in enumerate(zs):
        if values[j] and all(row[j] == 0 for row in dmat):
            return PairingWitness(z, values[j], True, table)
    # look for a combination of classes that every shift annihilates
    cols = [{i: dmat[i][j] for i in range(len(dmat)) if dmat[i][j]} for j in range(len(zs))]
    for v in linalg.kernel(cols):
        val = sum(c * values[j] for j, c in v.items())
        if val:
            z = A.algebra.zero()
            for j, c in v.items():
                z = z + c * zs[j]
            return PairingWitness(z, val, True, table)
    j = next((j for j, v in enumerate(values) if v), None)
    if j is None:
        return PairingWitness(zs[0], Fraction(0), False, table)
    return PairingWitness(zs[j], values[j], False, table)


def massey_from_problem(problem: MasseyProblem, integration=None, labels=()) -> MasseyResult:
    A = problem.ambient
    rep = problem.representative()
    if A.d(rep):
        raise AlgebraError("Massey representative is not closed")  # cannot happen for a valid problem
    m = problem.degree
    H = cohomology(A, m)
    coords = H.coordinates(rep) if rep else [Fraction(0)] * H.dimension
    basis, ech = _indeterminacy(A, problem.a12, problem.a34, problem.degrees, m)
    vanishes = ech.contains({i: c for i, c in enumerate(coords) if c})
    witness = _pairing(problem, rep, integration, m) if integration is not None else None
    return MasseyResult(problem, rep, m, coords, basis, vanishes, witness, tuple(labels))


def massey_triple(A, a12, a23, a34, integration=None, degrees=None, labels=()) -> MasseyResult:
    """``⟨a12, a23, a34⟩``; the ambient's own integration is used when none is given."""
    dga, own = _ambient(A)
    integration = integration if integration is not None else own
    problem = MasseyProblem.build(dga, a12, a23, a34, degrees=degrees)
    return massey_from_problem(problem, integration, labels)


def _class_bases(A: FreeCDGA, lo: int, hi: int):
    out = []
    for n in range(max(lo, 1), hi + 1):
        for i, r in enumerate(cohomology(A, n).class_representatives):
            out.append((n, i, r))
    return out


def _defined(A: FreeCDGA, x: Element, y: Element) -> bool:
    p = bar(x) * y
    if not p:
        return True
    return cohomology(A, p.degree).is_exact(p)


def scan_all_triples(A, degree_window: tuple[int, int], integration=None, parallel: bool = False) -> list[MasseyResult]:
    """Non-vanishing products of basis classes with all degrees (and the
    product's degree) inside the window."""
    dga, own = _ambient(A)
    integration = integration if integration is not None else own
    lo, hi = degree_window
    classes = _class_bases(dga, lo, hi)
    jobs = []
    for (n1, i1, x), (n2, i2, y), (n3, i3, z) in itertools.product(classes, repeat=3):
        m = n1 + n2 + n3 - 1
        if m > hi or m < lo:
            continue
        if dga.degree_cap is not None and m > dga.degree_cap:
            continue
        if not (_defined(dga, x, y) and _defined(dga, y, z)):
            continue
        jobs.append(((n1, n2, n3), (x, y, z), (f"{n1}.{i1}", f"{n2}.{i2}", f"{n3}.{i3}")))

    def run(job):
        degs, (x, y, z), labels = job
        return massey_triple(dga, x, y, z, integration, degrees=degs, labels=labels)

    if parallel and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor() as ex:
            results = list(ex.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    return [r for r in results if not r.vanishes]


# -- simultaneous vanishing ----------------------------------------------------


@dataclass
class UniformAssignment:
    shifts: dict  # slot -> closed Element added to that primitive
    problems: list  # shifted problems
    coefficients: dict = field(default_factory=dict)  # slot -> list of coefficients

    def representatives(self) -> list[Element]:
        return [p.representative() for p in self.problems]


def solve_uniform_vanishing(A, problems: Sequence[MasseyProblem], shift_space=None) -> UniformAssignment | None:
    """Move the primitives by closed elements so that every representative is exact.

    Problems whose ``slots`` agree share that primitive (they must start from
    the same element).  ``shift_space`` is a list of closed elements, or a
    mapping from degree to such a list; by default every slot may move by the
    cocycles of its degree.  Returns ``None`` when no choice in the span works.
    """
    dga, _ = _ambient(A)
    slots: dict[Hashable, tuple[int, Element]] = {}
    uses = []
    for idx, p in enumerate(problems):
        s13 = p.slots[0] if p.slots[0] is not None else (idx, "13")
        s24 = p.slots[1] if p.slots[1] is not None else (idx, "24")
        d1, d2, d3 = p.degrees
        for s, deg, prim in ((s13, d1 + d2 - 1, p.a13), (s24, d2 + d3 - 1, p.a24)):
            if s in slots:
                if slots[s][1] != prim or slots[s][0] != deg:
                    raise AlgebraError(f"problems sharing slot {s!r} use different primitives")
            else:
                slots[s] = (deg, prim)
        uses.append((s13, s24))

    def space(deg):
        if shift_space is None:
            return cohomology(dga, deg).cocycle_basis
        if isinstance(shift_space, Mapping):
            vals = shift_space.get(deg, [])
        else:
            vals = [x for x in shift_space if x and x.degree == deg]
        vals = [_element(dga, x) for x in vals]
        for x in vals:
            if dga.d(x):
                raise NotClosed(f"shift {x} is not closed")
        return vals

    spaces = {s: space(deg) for s, (deg, _) in slots.items()}
    unknowns = [(s, i) for s in slots for i in range(len(spaces[s]))]
    # one block of equations per problem: cohomology coordinates of the shifted representative
    offsets, total = [], 0
    for p in problems:
        offsets.append(total)
        total += cohomology(dga, p.degree).dimension
    columns = [dict() for _ in unknowns]
    rhs: dict[int, Fraction] = {}
    col_of = {u: j for j, u in enumerate(unknowns)}
    for idx, p in enumerate(problems):
        H = cohomology(dga, p.degree)
        off = offsets[idx]
        for i, c in enumerate(H.coordinates(p.representative())):
            if c:
                rhs[off + i] = -c
        s13, s24 = uses[idx]
        for s, which in ((s13, "13"), (s24, "24")):
            for i, e in enumerate(spaces[s]):
                eff = p.shift_effect(s13=e) if which == "13" else p.shift_effect(s24=e)
                if not eff:
                    continue
                col = columns[col_of[(s, i)]]
                for r, c in enumerate(H.coordinates(eff)):
                    if c:
                        col[off + r] = col.get(off + r, 0) + c
    sol = linalg.solve(columns, rhs) if unknowns else ({} if not rhs else None)
    if sol is None:
        return None
    shifts, coeffs = {}, {}
    for s in slots:
        cs = [sol.get(col_of[(s, i)], Fraction(0)) for i in range(len(spaces[s]))]
        x = dga.algebra.zero()
        for c, e in zip(cs, spaces[s]):
            x = x + c * e
        shifts[s] = x
        coeffs[s] = cs
    shifted = []
    for p, (s13, s24) in zip(problems, uses):
        q = p.shifted(shifts[s13], shifts[s24])
        if not cohomology(dga, q.degree).is_exact(q.representative()):
            raise AlgebraError("uniform shift failed its own check")  # solver bug guard
        shifted.append(q)
    return UniformAssignment(shifts, shifted, coeffs)


def triple_problems(A, classes: Sequence, triples: Sequence[tuple[int, int, int]], primitive: Callable | None = None, degrees=None) -> list[MasseyProblem]:
    """Problems ``⟨c_i, c_j, c_k⟩`` sharing primitives by ordered pair.

    The primitive of ``c̄_i·c_j`` is computed once (by ``primitive(i, j, x)``
    if given, else by :func:`solve_primitive`) and used by every triple that
    needs it.
    """
    dga, _ = _ambient(A)
    cls = [_element(dga, c) for c in classes]
    degs = degrees or [c.degree for c in cls]
    cache: dict = {}

    def prim(i, j):
        if (i, j) not in cache:
            x = bar(cls[i]) * cls[j]
            y = primitive(i, j, x) if primitive else solve_primitive(dga, x)
            if y is None:
                raise MasseyUndefined(f"undefined product: class {i} times class {j} is not exact")
            cache[(i, j)] = _element(dga, y)
        return cache[(i, j)]

    out = []
    for i, j, k in triples:
        out.append(
            MasseyProblem(dga, cls[i], cls[j], cls[k], prim(i, j), prim(j, k), ((i, j), (j, k)), (degs[i], degs[j], degs[k]))
        )
    return out


def cyclic_problems(A, a, b, c, primitive: Callable | None = None) -> list[MasseyProblem]:
    """``⟨a,b,c⟩, ⟨b,c,a⟩, ⟨c,a,b⟩`` with shared primitives."""
    return triple_problems(A, [a, b, c], [(0, 1, 2), (1, 2, 0), (2, 0, 1)], primitive)


def all_defined_triples(A, degree: int, primitive: Callable | None = None) -> list[MasseyProblem]:
    """Every defined ``⟨x, y, z⟩`` of basis classes of ``H^degree``, with shared primitives."""
    dga, _ = _ambient(A)
    reps = cohomology(dga, degree).class_representatives
    ok = {(i, j) for i in range(len(reps)) for j in range(len(reps)) if _defined(dga, reps[i], reps[j])}
    triples = [(i, j, k) for i, j, k in itertools.product(range(len(reps)), repeat=3) if (i, j) in ok and (j, k) in ok]
    return triple_problems(dga, reps, triples, primitive)
