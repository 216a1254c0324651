"""Task files: declarations of algebras, bundles and morphisms, then tasks.

Line grammar (``#`` starts a comment)::

    algebra <name>                 gen <name> <degree> | d <name> = <poly> | minimal
    pd <name> dim <n>              class <name> <degree> | cup <a> <b> = <poly>
                                   top <class> = <rational> | default-zero | p1 = <poly>
    bundle sphere|circle over <pd> class <poly> as <name> [gen <name>]
    morphism <name> from <src> to <tgt>     map <gen> = <poly>
    end                            (optional; any header also closes a block)
    task cohomology <alg> <deg>
    task minimal-model <target> upto <deg>
    task massey <alg> <a> <b> <c>
    task scan <alg> <lo> <hi>
    task audit miller|lefschetz <instance> [k <k>] [phi <poly>]
    task wall <pd>
    task induced <morphism> <deg>

``gen``/``d`` lines outside a block belong to an algebra named ``main``.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import pd
from .algebra import Element, FreeAlgebra, format_rational
from .audit import audit_theorem_lefschetz, audit_theorem_miller
from .constructions import BundleModel, circle_bundle_model, sphere_bundle_model
from .dga import DGAMorphism, FreeCDGA, cohomology, format_matrix, induced_map
from .errors import AlgebraError
from .massey import massey_triple, scan_all_triples
from .minimal_model import build_minimal_model
from .textpoly import PolynomialSyntaxError, evaluate, format_polynomial, parse_polynomial


class ParseError(AlgebraError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


# -- declarations ----------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    terms: tuple
    text_column: int = field(default=1, compare=False)

    def __str__(self):
        return format_polynomial(self.terms)

    def in_(self, algebra) -> Element:
        return evaluate(self.terms, algebra)


@dataclass(frozen=True)
class Item:
    # one block line: kind plus fields, with its source position kept out of comparisons
    kind: str
    fields: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    gens: tuple  # Item("gen", (name, degree))
    diffs: tuple  # Item("d", (name, Poly))
    minimal: bool = False
    line: int = field(default=0, compare=False)

    def render(self) -> list[str]:
        out = [f"algebra {self.name}"]
        out += [f"  gen {g.fields[0]} {g.fields[1]}" for g in self.gens]
        out += [f"  d {d.fields[0]} = {d.fields[1]}" for d in self.diffs]
        if self.minimal:
            out.append("  minimal")
        return out + ["end"]

    def build(self, registry=None) -> FreeCDGA:
        try:
            alg = FreeAlgebra([g.fields for g in self.gens])
        except AlgebraError as e:
            raise ParseError(str(e), self.line) from None
        diff = {}
        for d in self.diffs:
            name, poly = d.fields
            if name in diff:
                raise ParseError(f"differential of {name} given twice", d.line)
            diff[name] = _eval(poly, alg, d.line)
        try:
            return FreeCDGA(alg, diff)
        except AlgebraError as e:
            line = next((d.line for d in self.diffs if d.fields[0] in str(e)), self.line)
            raise ParseError(str(e), line) from None

    def linear_differentials(self) -> list[Item]:
        names = {g.fields[0] for g in self.gens}
        return [d for d in self.diffs if any(len(f) == 1 and f[0][0] in names and f[0][1] == 1 for _, f in d.fields[1].terms)]


@dataclass(frozen=True)
class PDDecl:
    name: str
    dim: int
    classes: tuple  # Item("class", (name, degree))
    cups: tuple  # Item("cup", (a, b, Poly))
    tops: tuple  # Item("top", (class, Fraction))
    default_zero: bool = False
    p1: Poly | None = None
    line: int = field(default=0, compare=False)

    def render(self) -> list[str]:
        out = [f"pd {self.name} dim {self.dim}"]
        if self.default_zero:
            out.append("  default-zero")
        out += [f"  class {c.fields[0]} {c.fields[1]}" for c in self.classes]
        out += [f"  cup {c.fields[0]} {c.fields[1]} = {c.fields[2]}" for c in self.cups]
        out += [f"  top {t.fields[0]} = {format_rational(t.fields[1])}" for t in self.tops]
        if self.p1 is not None:
            out.append(f"  p1 = {self.p1}")
        return out + ["end"]

    def build(self, registry=None) -> pd.PDAlgebra:
        products = {}
        for c in self.cups:
            a, b, poly = c.fields
            if (a, b) in products:
                raise ParseError(f"cup {a} {b} given twice", c.line)
            val = {}
            for coeff, factors in poly.terms:
                if len(factors) > 1 or (factors and factors[0][1] != 1):
                    raise ParseError("cup values must be linear in the classes", c.line, poly.text_column)
                key = factors[0][0] if factors else "1"
                val[key] = val.get(key, 0) + coeff
            products[(a, b)] = val
        top = {t.fields[0]: t.fields[1] for t in self.tops}
        try:
            return pd.PDAlgebra(self.dim, [c.fields for c in self.classes], products, top, self.default_zero, name=self.name)
        except AlgebraError as e:
            raise ParseError(f"pd {self.name}: {e}", self.line) from None

    def p1_class(self, A: pd.PDAlgebra) -> Element | None:
        return None if self.p1 is None else _eval(self.p1, A, self.line)

    @classmethod
    def from_algebra(cls, A: pd.PDAlgebra, name: str | None = None, p1: Element | None = None) -> "PDDecl":
        """Transcribe an algebra into a block listing every product explicitly."""
        classes = tuple(Item("class", (c, A.key_degree(c))) for c in A.class_names())
        cups = []
        names = A.class_names()
        for i, a in enumerate(names):
            for b in names[i:]:
                if A.key_degree(a) + A.key_degree(b) > A.dimension:
                    continue
                x = A[a] * A[b]
                terms = tuple((c, ((k, 1),)) for k, c in x.terms.items())
                cups.append(Item("cup", (a, b, Poly(terms))))
        tops = tuple(Item("top", (c, v)) for c, v in A.top.items())
        p = None
        if p1 is not None:
            p = Poly(tuple((c, ((k, 1),)) for k, c in p1.terms.items()))
        return cls(name or A.name, A.dimension, classes, tuple(cups), tops, False, p)


@dataclass(frozen=True)
class BundleDecl:
    kind: str
    base: str
    cls: Poly
    name: str
    gen: str | None = None
    line: int = field(default=0, compare=False)

    def render(self) -> list[str]:
        tail = f" gen {self.gen}" if self.gen else ""
        return [f"bundle {self.kind} over {self.base} class {self.cls} as {self.name}{tail}"]

    def build(self, registry) -> BundleModel:
        B = registry.get(self.base)
        if not isinstance(B, pd.PDAlgebra):
            raise ParseError(f"{self.base} is not a pd algebra", self.line)
        c = _eval(self.cls, B, self.line)
        try:
            if self.kind == "circle":
                return circle_bundle_model(B, c, name=self.gen or "theta", label=self.name)
            f = (c.degree or 0) - 1
            return sphere_bundle_model(B, f, c, name=self.gen or "tau", label=self.name)
        except AlgebraError as e:
            raise ParseError(str(e), self.line) from None


@dataclass(frozen=True)
class MorphismDecl:
    name: str
    source: str
    target: str
    maps: tuple  # Item("map", (gen, Poly))
    line: int = field(default=0, compare=False)

    def render(self) -> list[str]:
        out = [f"morphism {self.name} from {self.source} to {self.target}"]
        out += [f"  map {m.fields[0]} = {m.fields[1]}" for m in self.maps]
        return out + ["end"]

    def build(self, registry) -> DGAMorphism:
        src = _as_dga(registry.get(self.source))
        tgt = _as_dga(registry.get(self.target))
        if src is None or tgt is None:
            raise ParseError("morphism ends must be algebras, pd algebras or bundles", self.line)
        imgs = {}
        for m in self.maps:
            g, poly = m.fields
            if g not in src.algebra.names():
                raise ParseError(f"{g} is not a generator of {self.source}", m.line)
            imgs[g] = _eval(poly, tgt.algebra, m.line)
        try:
            return DGAMorphism(src, tgt, imgs)
        except AlgebraError as e:
            raise ParseError(str(e), self.line) from None


def _as_dga(obj):
    if isinstance(obj, FreeCDGA):
        return obj
    if isinstance(obj, pd.PDAlgebra):
        return pd.as_formal_dga(obj)
    if isinstance(obj, BundleModel):
        return obj.total
    return None


def _eval(poly: Poly, algebra, line: int) -> Element:
    try:
        return poly.in_(algebra)
    except AlgebraError as e:
        raise ParseError(str(e), line, poly.text_column) from None


@dataclass(frozen=True)
class Task:
    kind: str
    args: tuple  # canonical string arguments
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return " ".join(("task", self.kind) + self.args)


@dataclass
class TaskFile:
    declarations: list = field(default_factory=list)
    tasks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    objects: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other):
        return isinstance(other, TaskFile) and self.declarations == other.declarations and self.tasks == other.tasks

    def declaration(self, name: str):
        for d in self.declarations:
            if d.name == name:
                return d
        raise KeyError(name)


def print_taskfile(tf: TaskFile) -> str:
    lines = []
    for d in tf.declarations:
        lines += d.render()
    lines += [t.render() for t in tf.tasks]
    return "\n".join(lines) + "\n"


# -- parser ----------------------------------------------------------------------

_WORD = re.compile(r"\S+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*$")
_HEADERS = {"algebra", "pd", "bundle", "morphism", "task", "end"}


def _poly(text: str, line: int, column: int) -> Poly:
    try:
        return Poly(parse_polynomial(text), column)
    except PolynomialSyntaxError as e:
        raise ParseError(str(e).split(": ", 1)[-1], line, column + e.column - 1) from None


def parse(text: str) -> TaskFile:
    tf = TaskFile()
    reg = tf.objects
    block = None  # (kind, header dict, items list)

    def close():
        nonlocal block
        if block is None:
            return
        kind, head, items = block
        block = None
        if kind == "algebra":
            decl = AlgebraDecl(
                head["name"],
                tuple(i for i in items if i.kind == "gen"),
                tuple(i for i in items if i.kind == "d"),
                any(i.kind == "minimal" for i in items),
                head["line"],
            )
            if decl.minimal:
                for d in decl.linear_differentials():
                    tf.warnings.append(f"line {d.line}: d{d.fields[0]} has a linear term, so the model is not minimal")
        elif kind == "pd":
            p1 = [i for i in items if i.kind == "p1"]
            decl = PDDecl(
                head["name"],
                head["dim"],
                tuple(i for i in items if i.kind == "class"),
                tuple(i for i in items if i.kind == "cup"),
                tuple(i for i in items if i.kind == "top"),
                any(i.kind == "default-zero" for i in items),
                p1[-1].fields[0] if p1 else None,
                head["line"],
            )
        else:
            decl = MorphismDecl(head["name"], head["source"], head["target"], tuple(items), head["line"])
        _register(tf, decl)

    def need_name(tok, ln):
        word, col = tok
        if not _NAME.match(word):
            raise ParseError(f"expected a name, got {word!r}", ln, col)
        return word

    def need_int(tok, ln):
        word, col = tok
        if not re.fullmatch(r"-?\d+", word):
            raise ParseError(f"expected an integer, got {word!r}", ln, col)
        return int(word)

    def rest_after_eq(raw, toks, start, ln):
        # polynomial text after "=" (toks[start] must be "=")
        if len(toks) <= start or toks[start][0] != "=":
            col = toks[start][1] if len(toks) > start else len(raw) + 1
            raise ParseError("expected '='", ln, col)
        if len(toks) == start + 1:
            raise ParseError("missing right-hand side", ln, len(raw) + 1)
        col = toks[start + 1][1]
        return raw[col - 1 :], col

    for ln, raw in enumerate(text.splitlines(), start=1):
        raw = raw.split("#", 1)[0].rstrip()
        toks = [(m.group(), m.start() + 1) for m in _WORD.finditer(raw)]
        if not toks:
            continue
        kw = toks[0][0]
        if kw in _HEADERS:
            close()
        if kw == "end":
            if len(toks) > 1:
                raise ParseError("unexpected text after 'end'", ln, toks[1][1])
            continue
        if kw == "algebra":
            if len(toks) != 2:
                raise ParseError("usage: algebra <name>", ln, toks[0][1])
            block = ("algebra", {"name": need_name(toks[1], ln), "line": ln}, [])
        elif kw == "pd":
            if len(toks) != 4 or toks[2][0] != "dim":
                raise ParseError("usage: pd <name> dim <n>", ln, toks[0][1])
            block = ("pd", {"name": need_name(toks[1], ln), "dim": need_int(toks[3], ln), "line": ln}, [])
        elif kw == "morphism":
            if len(toks) != 6 or toks[2][0] != "from" or toks[4][0] != "to":
                raise ParseError("usage: morphism <name> from <src> to <tgt>", ln, toks[0][1])
            block = (
                "morphism",
                {"name": need_name(toks[1], ln), "source": toks[3][0], "target": toks[5][0], "line": ln},
                [],
            )
            for key, tok in (("source", toks[3]), ("target", toks[5])):
                if tok[0] not in reg:
                    raise ParseError(f"undefined {key} {tok[0]!r}", ln, tok[1])
        elif kw == "bundle":
            _parse_bundle(tf, raw, toks, ln)
        elif kw == "task":
            tf.tasks.append(_parse_task(tf, raw, toks, ln))
        elif kw in ("gen", "d", "minimal"):
            if block is None:
                if "main" in reg:
                    raise ParseError("generator lines outside a block, but 'main' is already declared", ln, 1)
                block = ("algebra", {"name": "main", "line": ln}, [])
            if block[0] != "algebra":
                raise ParseError(f"'{kw}' is not allowed in a {block[0]} block", ln, 1)
            items = block[2]
            if kw == "gen":
                if len(toks) != 3:
                    raise ParseError("usage: gen <name> <degree>", ln, 1)
                deg = need_int(toks[2], ln)
                if deg < 1:
                    raise ParseError("generator degrees must be positive", ln, toks[2][1])
                items.append(Item("gen", (need_name(toks[1], ln), deg), ln))
            elif kw == "d":
                if len(toks) < 2:
                    raise ParseError("usage: d <name> = <polynomial>", ln, 1)
                name = need_name(toks[1], ln)
                body, col = rest_after_eq(raw, toks, 2, ln)
                items.append(Item("d", (name, _poly(body, ln, col)), ln))
            else:
                items.append(Item("minimal", (), ln))
        elif kw in ("class", "cup", "top", "default-zero", "p1"):
            if block is None or block[0] != "pd":
                raise ParseError(f"'{kw}' is only allowed in a pd block", ln, 1)
            items = block[2]
            if kw == "class":
                if len(toks) != 3:
                    raise ParseError("usage: class <name> <degree>", ln, 1)
                items.append(Item("class", (need_name(toks[1], ln), need_int(toks[2], ln)), ln))
            elif kw == "cup":
                if len(toks) < 4:
                    raise ParseError("usage: cup <a> <b> = <polynomial>", ln, 1)
                a, b = need_name(toks[1], ln), need_name(toks[2], ln)
                body, col = rest_after_eq(raw, toks, 3, ln)
                items.append(Item("cup", (a, b, _poly(body, ln, col)), ln))
            elif kw == "top":
                if len(toks) != 4 or toks[2][0] != "=":
                    raise ParseError("usage: top <class> = <rational>", ln, 1)
                try:
                    v = Fraction(toks[3][0])
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"expected a rational, got {toks[3][0]!r}", ln, toks[3][1]) from None
                items.append(Item("top", (need_name(toks[1], ln), v), ln))
            elif kw == "p1":
                body, col = rest_after_eq(raw, toks, 1, ln)
                items.append(Item("p1", (_poly(body, ln, col),), ln))
            else:
                items.append(Item("default-zero", (), ln))
        elif kw == "map":
            if block is None or block[0] != "morphism":
                raise ParseError("'map' is only allowed in a morphism block", ln, 1)
            if len(toks) < 2:
                raise ParseError("usage: map <gen> = <polynomial>", ln, 1)
            body, col = rest_after_eq(raw, toks, 2, ln)
            block[2].append(Item("map", (need_name(toks[1], ln), _poly(body, ln, col)), ln))
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, toks[0][1])
    close()
    return tf


def _register(tf: TaskFile, decl):
    if decl.name in tf.objects:
        raise ParseError(f"{decl.name!r} is already declared", decl.line)
    tf.objects[decl.name] = decl.build(tf.objects)
    tf.declarations.append(decl)


def _parse_bundle(tf, raw, toks, ln):
    words = [t[0] for t in toks]
    usage = "usage: bundle sphere|circle over <pd> class <polynomial> as <name> [gen <name>]"
    if len(words) < 7 or words[2] != "over" or words[4] != "class" or "as" not in words[5:]:
        raise ParseError(usage, ln, 1)
    kind = words[1]
    if kind not in ("sphere", "circle"):
        raise ParseError(f"bundle kind must be sphere or circle, got {kind!r}", ln, toks[1][1])
    if words[3] not in tf.objects:
        raise ParseError(f"undefined pd {words[3]!r}", ln, toks[3][1])
    i_as = len(words) - 1 - words[::-1].index("as")
    start, end_col = toks[5][1], toks[i_as][1]
    cls = _poly(raw[start - 1 : end_col - 1], ln, start)
    tail = words[i_as + 1 :]
    gen = None
    if len(tail) == 3 and tail[1] == "gen":
        gen = tail[2]
    elif len(tail) != 1:
        raise ParseError(usage, ln, toks[i_as][1])
    for w, tok in zip(tail[::2], toks[i_as + 1 :: 2]):
        if not _NAME.match(w):
            raise ParseError(f"expected a name, got {w!r}", ln, tok[1])
    _register(tf, BundleDecl(kind, words[3], cls, tail[0], gen, ln))


_TASK_KINDS = ("cohomology", "minimal-model", "massey", "scan", "audit", "wall", "induced")


def _parse_task(tf, raw, toks, ln) -> Task:
    if len(toks) < 2:
        raise ParseError("usage: task <kind> ...", ln, 1)
    kind, kcol = toks[1]
    words = [t[0] for t in toks[2:]]
    cols = [t[1] for t in toks[2:]]
    if kind not in _TASK_KINDS:
        raise ParseError(f"unknown task {kind!r}", ln, kcol)

    def ref(i, types=None, what="object"):
        if i >= len(words):
            raise ParseError(f"missing {what}", ln, len(raw) + 1)
        obj = tf.objects.get(words[i])
        if obj is None:
            raise ParseError(f"undefined {what} {words[i]!r}", ln, cols[i])
        if types and not isinstance(obj, types):
            raise ParseError(f"{words[i]!r} is not a {what}", ln, cols[i])
        return obj

    def integer(i):
        if i >= len(words) or not re.fullmatch(r"-?\d+", words[i]):
            raise ParseError("expected an integer", ln, cols[i] if i < len(words) else len(raw) + 1)
        return words[i]

    def arity(n, usage):
        if len(words) != n:
            raise ParseError(f"usage: task {kind} {usage}", ln, kcol)

    models = (FreeCDGA, pd.PDAlgebra, BundleModel)
    if kind == "cohomology":
        arity(2, "<algebra> <degree>")
        ref(0, models, "algebra")
        return Task(kind, (words[0], integer(1)), ln)
    if kind == "minimal-model":
        arity(3, "<target> upto <degree>")
        ref(0, models, "target")
        if words[1] != "upto":
            raise ParseError("expected 'upto'", ln, cols[1])
        return Task(kind, (words[0], "upto", integer(2)), ln)
    if kind == "massey":
        arity(4, "<algebra> <a> <b> <c>")
        obj = ref(0, models, "algebra")
        alg = _as_dga(obj).algebra
        args = [words[0]]
        for i in (1, 2, 3):
            p = _poly(words[i], ln, cols[i])
            x = _eval(p, alg, ln)
            if x and not x.is_homogeneous():
                raise ParseError("Massey entries must be homogeneous", ln, cols[i])
            args.append(str(p).replace(" ", ""))
        return Task(kind, tuple(args), ln)
    if kind == "scan":
        arity(3, "<algebra> <lo> <hi>")
        ref(0, models, "algebra")
        return Task(kind, (words[0], integer(1), integer(2)), ln)
    if kind == "wall":
        arity(1, "<pd>")
        ref(0, pd.PDAlgebra, "pd algebra")
        return Task(kind, (words[0],), ln)
    if kind == "induced":
        arity(2, "<morphism> <degree>")
        ref(0, DGAMorphism, "morphism")
        return Task(kind, (words[0], integer(1)), ln)
    # audit
    if len(words) < 2 or words[0] not in ("miller", "lefschetz"):
        raise ParseError("usage: task audit miller|lefschetz <instance> [k <k>] [phi <polynomial>]", ln, kcol)
    obj = ref(1, (pd.PDAlgebra, BundleModel), "instance")
    args = [words[0], words[1]]
    i = 2
    if i < len(words) and words[i] == "k":
        args += ["k", integer(i + 1)]
        i += 2
    if i < len(words) and words[i] == "phi":
        if i + 1 >= len(words):
            raise ParseError("missing polynomial after 'phi'", ln, len(raw) + 1)
        p = _poly(raw[cols[i + 1] - 1 :], ln, cols[i + 1])
        _eval(p, _as_dga(obj).algebra, ln)
        args += ["phi", str(p)]
        i = len(words)
    if i != len(words):
        raise ParseError(f"unexpected {words[i]!r}", ln, cols[i])
    if words[0] == "lefschetz" and "phi" not in args:
        raise ParseError("lefschetz audits need 'phi <polynomial>'", ln, kcol)
    return Task(kind, tuple(args), ln)


# -- running ---------------------------------------------------------------------


@dataclass
class RunReport:
    transcript: str
    records: list  # list of lists of (key, value)
    errors: int

    @property
    def exit_code(self) -> int:
        return 1 if self.errors else 0

    def records_text(self) -> str:
        return "\n\n".join("\n".join(f"{k} = {v}" for k, v in rec) for rec in self.records) + "\n"


def _q(x) -> str:
    return format_rational(Fraction(x))


def _b(flag) -> str:
    return "true" if flag else "false"


class _Runner:
    def __init__(self, tf: TaskFile, cap=None, strict_wall=False):
        self.tf = tf
        self.cap = cap
        self.strict_wall = strict_wall
        self.objects = {}
        for name, obj in tf.objects.items():
            self.objects[name] = self._capped(obj)

    def _capped(self, obj):
        if self.cap is None:
            return obj
        if isinstance(obj, FreeCDGA):
            return obj.with_cap(self.cap)
        if isinstance(obj, BundleModel):
            return replace(obj, total=obj.total.with_cap(self.cap))
        return obj

    def dga(self, name):
        d = _as_dga(self.objects[name])
        if self.cap is not None and isinstance(self.objects[name], pd.PDAlgebra):
            d = d.with_cap(self.cap)
        return d

    def run_task(self, index: int, task: Task):
        rec = [("task", str(index)), ("kind", task.kind)]
        out = [f"[{index}] {task.render()[5:]}"]
        try:
            getattr(self, "do_" + task.kind.replace("-", "_"))(task, rec, out)
            rec.append(("status", "ok"))
            ok = True
        except AlgebraError as e:
            rec.append(("status", "error"))
            rec.append(("error", str(e)))
            out.append(f"  error: {e}")
            ok = False
        return "\n".join(out), rec, ok

    def do_cohomology(self, task, rec, out):
        name, n = task.args[0], int(task.args[1])
        H = cohomology(self.dga(name), n)
        reps = [str(r) for r in H.class_representatives]
        rec += [("algebra", name), ("degree", str(n)), ("dimension", str(H.dimension)), ("classes", "; ".join(reps))]
        out.append(f"  dim {n} = {H.dimension}")
        if reps:
            out.append(f"  classes: {', '.join(reps)}")

    def do_minimal_model(self, task, rec, out):
        name, up = task.args[0], int(task.args[2])
        target = self.objects[name]
        stages = build_minimal_model(target if not isinstance(target, FreeCDGA) else self.dga(name), up)
        st = stages[-1]
        rec += [("target", name), ("upto", str(up)), ("generators", str(len(st.model.generators)))]
        out.append(f"  {len(st.model.generators)} generators through degree {up}")
        for g, deg, tag, d, r in st.table():
            rec.append((f"gen.{g}", f"degree {deg}, {tag}, d = {d}, rho = {r}"))
            out.append(f"  {g:8s} {deg:3d} {tag}  d = {d}   rho = {r}")

    def do_massey(self, task, rec, out):
        name = task.args[0]
        obj = self.objects[name]
        model = obj if isinstance(obj, FreeCDGA) else (pd.oriented(obj) if self.cap is None else _capped_oriented(obj, self.cap))
        alg = _as_dga(obj).algebra
        xs = [evaluate(parse_polynomial(a), alg) for a in task.args[1:]]
        r = massey_triple(model, *xs)
        rec += [
            ("algebra", name),
            ("triple", ", ".join(task.args[1:])),
            ("degree", str(r.degree)),
            ("representative", str(r.representative)),
            ("class", "[" + " ".join(_q(c) for c in r.class_coordinates) + "]"),
            ("indeterminacy_dimension", str(r.indeterminacy_dimension)),
            ("indeterminacy", "; ".join(str(b) for b in r.indeterminacy_basis)),
            ("vanishes", _b(r.vanishes)),
        ]
        out.append(f"  representative {r.representative} in degree {r.degree}")
        out.append(f"  indeterminacy dimension {r.indeterminacy_dimension}; vanishes: {_b(r.vanishes)}")
        w = r.pairing_witness
        if w is not None:
            for z, v in w.table:
                rec.append((f"pairing({z})", _q(v)))
                out.append(f"  pairing({z}) = {_q(v)}")
            rec += [("witness", str(w.z)), ("witness_value", _q(w.value)), ("certified", _b(w.certified))]
            if w.certified:
                out.append(f"  certified: shift-invariant pairing with {w.z} = {_q(w.value)}, not formal")
        verdict = "non-formal" if (w is not None and w.certified) or not r.vanishes else "vanishes"
        rec.append(("verdict", verdict))

    def do_scan(self, task, rec, out):
        name, lo, hi = task.args[0], int(task.args[1]), int(task.args[2])
        obj = self.objects[name]
        model = obj if isinstance(obj, FreeCDGA) else (pd.oriented(obj) if self.cap is None else _capped_oriented(obj, self.cap))
        found = scan_all_triples(model, (lo, hi))
        rec += [("algebra", name), ("window", f"{lo} {hi}"), ("nonvanishing", str(len(found)))]
        out.append(f"  {len(found)} non-vanishing triple products in [{lo}, {hi}]")
        for i, r in enumerate(found, 1):
            p = r.problem
            trip = f"<{p.a12}, {p.a23}, {p.a34}>"
            extra = ""
            if r.pairing_witness is not None and r.pairing_witness.certified:
                extra = f", pairing({r.pairing_witness.z}) = {_q(r.pairing_witness.value)}"
            rec.append((f"product.{i}", f"{trip} = [{r.representative}]{extra}"))
            out.append(f"  {trip} = [{r.representative}]{extra}")

    def do_audit(self, task, rec, out):
        mode, name = task.args[0], task.args[1]
        args = dict(zip(task.args[2::2], task.args[3::2]))
        obj = self.objects[name]
        k = int(args["k"]) if "k" in args else None
        if mode == "miller":
            rep = audit_theorem_miller(obj, k, instance=name)
        else:
            om = pd.oriented(obj)
            phi = om.coerce(args["phi"])
            rep = audit_theorem_lefschetz(obj, k if k is not None else pd.connectivity(obj), phi, instance=name)
        rec += [("instance", name), ("theorem", rep.theorem), ("k", str(rep.k)), ("dimension", str(rep.dimension))]
        for h in rep.hypotheses:
            rec.append((f"hypothesis.{h.name}", f"{'pass' if h.passed else 'fail'} ({h.evidence})"))
            out.append(f"  {'pass' if h.passed else 'FAIL'}  {h.name}: {h.evidence}")
        rec.append(("prediction", rep.prediction or "none"))
        out.append(f"  prediction: {rep.prediction or 'none'}")
        for key, v in rep.cross_check.items():
            if key == "pairing_matrix":
                v = format_matrix(v)
            rec.append((f"cross_check.{key}", str(v)))
        rec.append(("consistent", "none" if rep.consistent is None else _b(rep.consistent)))
        rec.append(("massey_obstructions", str(len(rep.massey_obstructions))))
        if rep.consistent is not None:
            out.append(f"  consistent: {_b(rep.consistent)}")
        if rep.massey_obstructions:
            out.append(f"  {len(rep.massey_obstructions)} non-vanishing Massey products: not formal")

    def do_wall(self, task, rec, out):
        name = task.args[0]
        A = self.objects[name]
        decl = self.tf.declaration(name)
        w = pd.WallData.from_pd(A, decl.p1_class(A))
        v = pd.validate_wall(w)
        rec += [("pd", name), ("checked", str(v.checked)), ("passed", _b(v.passed)), ("violations", str(len(v.violations)))]
        out.append(f"  {v.checked} congruences checked: {'all hold' if v.passed else f'{len(v.violations)} violated'}")
        for i, x in enumerate(v.violations, 1):
            rec.append((f"violation.{i}", str(x)))
            out.append(f"  {x}")
        if self.strict_wall and not v.passed:
            raise AlgebraError(f"{len(v.violations)} Wall congruences violated")

    def do_induced(self, task, rec, out):
        name, n = task.args[0], int(task.args[1])
        m = induced_map(self.objects[name], n)
        rec += [("morphism", name), ("degree", str(n)), ("matrix", format_matrix(m))]
        out.append(f"  H^{n}: {format_matrix(m)}")


def _capped_oriented(obj, cap):
    om = pd.oriented(obj)
    return replace(om, dga=om.dga.with_cap(cap))


def run(tf: TaskFile, cap: int | None = None, parallel: bool = False, strict_wall: bool = False) -> RunReport:
    runner = _Runner(tf, cap, strict_wall)
    jobs = list(enumerate(tf.tasks, 1))
    if parallel and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor() as ex:
            results = list(ex.map(lambda j: runner.run_task(*j), jobs))
    else:
        results = [runner.run_task(i, t) for i, t in jobs]
    transcript = "\n".join(r[0] for r in results) + ("\n" if results else "")
    return RunReport(transcript, [r[1] for r in results], sum(1 for r in results if not r[2]))


def bundled_task(name: str = "seven_manifold") -> str:
    """Text of a task file shipped with the package."""
    from importlib.resources import files

    return files("sullivan").joinpath("data", f"{name}.task").read_text(encoding="utf-8")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="sullivan", description="Run rational homotopy task files.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="parse and run a task file")
    r.add_argument("file")
    r.add_argument("--cap", type=int, default=None, help="global degree cap")
    r.add_argument("--parallel", action="store_true", help="run independent tasks concurrently")
    r.add_argument("--records", default=None, help="write key = value records to this path")
    r.add_argument("--strict-wall", action="store_true", help="treat Wall congruence violations as errors")
    p = sub.add_parser("print", help="parse a task file and print it in canonical form")
    p.add_argument("file")
    args = ap.parse_args(argv)
    text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    try:
        tf = parse(text)
    except ParseError as e:
        print(f"{args.file}:{e.line}:{e.column}: {e.message}", file=sys.stderr)
        return 2
    for w in tf.warnings:
        print(f"{args.file}: warning: {w}", file=sys.stderr)
    if args.command == "print":
        sys.stdout.write(print_taskfile(tf))
        return 0
    rep = run(tf, cap=args.cap, parallel=args.parallel, strict_wall=args.strict_wall)
    sys.stdout.write(rep.transcript)
    if args.records:
        with open(args.records, "w", encoding="utf-8") as fh:
            fh.write(rep.records_text())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
