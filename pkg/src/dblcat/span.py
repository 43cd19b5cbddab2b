"""The double category of spans over finite sets.

Horizontal arrows are spans, vertical arrows are functions, squares are
apex maps commuting with both legs.  Endomorphism spans are directed
graphs; monads on them are small categories; the free monad on a graph
is the free category, computed by path enumeration.

Spans carry construction metadata (`origin`) recording how a composite
was built; the coherence isomorphisms (associator, unitors) are read
off that metadata rather than searched for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .finset import (
    FinFun,
    FinSet,
    compose_fun,
    coproduct,
    copair,
    identity,
    pair_name,
    pullback,
    pullback_mediate,
)
from . import doublecat as dc
from .doublecat import (
    BoundaryError,
    Equalizer1,
    FramedArrow,
    FreeMonadInH,
    HorMonad,
    Iso,
    LocalCoproduct,
)


@dataclass(frozen=True)
class Span:
    src: FinSet
    tgt: FinSet
    apex: FinSet
    left: FinFun  # apex -> src
    right: FinFun  # apex -> tgt
    origin: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.left.dom != self.apex or self.left.cod != self.src:
            raise BoundaryError("span left leg has wrong boundaries")
        if self.right.dom != self.apex or self.right.cod != self.tgt:
            raise BoundaryError("span right leg has wrong boundaries")

    def __repr__(self):
        return f"Span({self.src}<-{self.apex}->{self.tgt})"


@dataclass(frozen=True)
class SpanSquare:
    top: Span
    bottom: Span
    u: FinFun  # top.src -> bottom.src
    v: FinFun  # top.tgt -> bottom.tgt
    mid: FinFun  # top.apex -> bottom.apex

    def __post_init__(self):
        if self.u.dom != self.top.src or self.u.cod != self.bottom.src:
            raise BoundaryError("square: left vertical has wrong boundaries")
        if self.v.dom != self.top.tgt or self.v.cod != self.bottom.tgt:
            raise BoundaryError("square: right vertical has wrong boundaries")
        if self.mid.dom != self.top.apex or self.mid.cod != self.bottom.apex:
            raise BoundaryError("square: apex map has wrong boundaries")
        if compose_fun(self.bottom.left, self.mid) != compose_fun(self.u, self.top.left):
            raise BoundaryError("square: left region does not commute")
        if compose_fun(self.bottom.right, self.mid) != compose_fun(self.v, self.top.right):
            raise BoundaryError("square: right region does not commute")


def id_span(x: FinSet) -> Span:
    i = identity(x)
    return Span(x, x, x, i, i, origin=("id", x))


def compose_spans(g: Span, f: Span) -> Span:
    """g after f, with the pullback projections kept as metadata."""
    if f.tgt != g.src:
        raise BoundaryError(f"cannot compose spans: {f.tgt} != {g.src}")
    apex, p1, p2 = pullback(f.right, g.left)
    return Span(
        f.src,
        g.tgt,
        apex,
        compose_fun(f.left, p1),
        compose_fun(g.right, p2),
        origin=("comp", g, f, p1, p2),
    )


def span_from_relation(src: FinSet, tgt: FinSet, pairs) -> Span:
    """A span whose apex elements are named edges (name, src, tgt)."""
    names, lt, rt = [], [], []
    for name, a, b in pairs:
        names.append(name)
        lt.append(a)
        rt.append(b)
    apex = FinSet(names)
    return Span(src, tgt, apex, FinFun(apex, src, tuple(lt)), FinFun(apex, tgt, tuple(rt)))


def _comp_projections(f: Span) -> tuple[FinFun, FinFun]:
    assert f.origin is not None and f.origin[0] == "comp"
    return f.origin[3], f.origin[4]


class SpanInstance(dc.DoubleCategory):
    name = "span"
    has_framed = True
    has_local_coproducts = True
    has_equalizers = True
    has_free_monads = True

    def __init__(self, free_bound: int = 16):
        self.free_bound = free_bound

    # -- arrows -----------------------------------------------------------
    def hsrc(self, f: Span):
        return f.src

    def htgt(self, f: Span):
        return f.tgt

    def hid(self, x: FinSet):
        return id_span(x)

    def hcomp(self, g: Span, f: Span):
        return compose_spans(g, f)

    def vsrc(self, u: FinFun):
        return u.dom

    def vtgt(self, u: FinFun):
        return u.cod

    def vid(self, x: FinSet):
        return identity(x)

    def vcomp(self, v: FinFun, u: FinFun):
        return compose_fun(v, u)

    # -- squares ----------------------------------------------------------
    def sq_top(self, s: SpanSquare):
        return s.top

    def sq_bottom(self, s: SpanSquare):
        return s.bottom

    def sq_left(self, s: SpanSquare):
        return s.u

    def sq_right(self, s: SpanSquare):
        return s.v

    def sq_vid(self, f: Span):
        return SpanSquare(f, f, identity(f.src), identity(f.tgt), identity(f.apex))

    def sq_hid(self, u: FinFun):
        return SpanSquare(id_span(u.dom), id_span(u.cod), u, u, u)

    def sq_hcomp(self, s2: SpanSquare, s1: SpanSquare):
        if s1.top.tgt != s2.top.src or s1.bottom.tgt != s2.bottom.src:
            raise BoundaryError("horizontal composite: spans do not align")
        if s1.v != s2.u:
            raise BoundaryError("horizontal composite: middle verticals differ")
        top = compose_spans(s2.top, s1.top)
        bottom = compose_spans(s2.bottom, s1.bottom)
        p1, p2 = _comp_projections(top)
        mid = pullback_mediate(
            bottom.apex, compose_fun(s1.mid, p1), compose_fun(s2.mid, p2)
        )
        return SpanSquare(top, bottom, s1.u, s2.v, mid)

    def sq_vcomp(self, s2: SpanSquare, s1: SpanSquare):
        if s1.bottom != s2.top:
            raise BoundaryError("vertical composite: middle arrows differ")
        return SpanSquare(
            s1.top,
            s2.bottom,
            compose_fun(s2.u, s1.u),
            compose_fun(s2.v, s1.v),
            compose_fun(s2.mid, s1.mid),
        )

    # -- coherence --------------------------------------------------------
    def _globular(self, top: Span, bottom: Span, table: dict) -> SpanSquare:
        mid = FinFun(top.apex, bottom.apex, table)
        return SpanSquare(top, bottom, identity(top.src), identity(top.tgt), mid)

    def associator(self, h: Span, g: Span, f: Span) -> Iso:
        lhs = compose_spans(compose_spans(h, g), f)  # (h.g).f
        rhs = compose_spans(h, compose_spans(g, f))  # h.(g.f)
        pf, phg = _comp_projections(lhs)
        pg_l, ph_l = _comp_projections(lhs.origin[1])
        fwd_table = {}
        for e in lhs.apex:
            a = pf(e)
            b = pg_l(phg(e))
            c = ph_l(phg(e))
            fwd_table[e] = pair_name(pair_name(a, b), c)
        fwd = self._globular(lhs, rhs, fwd_table)
        inv_table = {fwd_table[e]: e for e in lhs.apex}
        inv = self._globular(rhs, lhs, inv_table)
        return Iso(fwd, inv)

    def lunitor(self, f: Span) -> Iso:
        comp = compose_spans(id_span(f.tgt), f)
        p1, _ = _comp_projections(comp)
        fwd = SpanSquare(comp, f, identity(f.src), identity(f.tgt), p1)
        inv_mid = pullback_mediate(comp.apex, identity(f.apex), f.right)
        inv = SpanSquare(f, comp, identity(f.src), identity(f.tgt), inv_mid)
        return Iso(fwd, inv)

    def runitor(self, f: Span) -> Iso:
        comp = compose_spans(f, id_span(f.src))
        _, p2 = _comp_projections(comp)
        fwd = SpanSquare(comp, f, identity(f.src), identity(f.tgt), p2)
        inv_mid = pullback_mediate(comp.apex, f.left, identity(f.apex))
        inv = SpanSquare(f, comp, identity(f.src), identity(f.tgt), inv_mid)
        return Iso(fwd, inv)

    def hor_isos(self, f: Span, g: Span):
        """All invertible globular squares f -> g, by backtracking over
        leg-compatible bijections of the apexes."""
        if f.src != g.src or f.tgt != g.tgt or len(f.apex) != len(g.apex):
            return
        candidates = []
        for a in f.apex:
            ok = tuple(
                b
                for b in g.apex
                if g.left(b) == f.left(a) and g.right(b) == f.right(a)
            )
            if not ok:
                return
            candidates.append(ok)
        used: set[str] = set()
        chosen: list[str] = []

        def extend(i):
            if i == len(f.apex):
                mid = FinFun(f.apex, g.apex, tuple(chosen))
                fwd = SpanSquare(f, g, identity(f.src), identity(f.tgt), mid)
                inv = SpanSquare(g, f, identity(f.src), identity(f.tgt), mid.inverse())
                yield Iso(fwd, inv)
                return
            for b in candidates[i]:
                if b in used:
                    continue
                used.add(b)
                chosen.append(b)
                yield from extend(i + 1)
                used.discard(b)
                chosen.pop()

        yield from extend(0)

    def enumerate_squares(self, top: Span, bottom: Span, u: FinFun, v: FinFun):
        """All squares with the given boundary."""
        lcone = compose_fun(u, top.left)
        rcone = compose_fun(v, top.right)
        candidates = []
        for a in top.apex:
            ok = tuple(
                b
                for b in bottom.apex
                if bottom.left(b) == lcone(a) and bottom.right(b) == rcone(a)
            )
            if not ok:
                return
            candidates.append(ok)
        chosen: list[str] = []

        def extend(i):
            if i == len(top.apex):
                mid = FinFun(top.apex, bottom.apex, tuple(chosen))
                yield SpanSquare(top, bottom, u, v, mid)
                return
            for b in candidates[i]:
                chosen.append(b)
                yield from extend(i + 1)
                chosen.pop()

        yield from extend(0)

    # -- framing ----------------------------------------------------------
    def framed(self, u: FinFun) -> FramedArrow:
        x, x1 = u.dom, u.cod
        companion = Span(x, x1, x, identity(x), u)
        conjoint = Span(x1, x, x, u, identity(x))
        alpha = SpanSquare(companion, id_span(x1), u, identity(x1), u)
        beta = SpanSquare(conjoint, id_span(x1), identity(x1), u, u)
        gamma = SpanSquare(id_span(x), conjoint, u, identity(x), identity(x))
        delta = SpanSquare(id_span(x), companion, identity(x), u, identity(x))
        return FramedArrow(u, companion, conjoint, alpha, beta, gamma, delta)

    def recognize_conjoint(self, f: Span) -> Optional[FinFun]:
        """If f has the shape of a conjoint span, return the vertical
        arrow it belongs to."""
        if f.tgt == f.apex and f.right.is_identity():
            return f.left
        return None

    # -- local coproducts --------------------------------------------------
    def local_coproduct(self, f: Span, g: Span) -> LocalCoproduct:
        if f.src != g.src or f.tgt != g.tgt:
            raise BoundaryError("local coproduct needs parallel spans")
        apex, inl, inr = coproduct(f.apex, g.apex)
        s = Span(
            f.src,
            f.tgt,
            apex,
            copair(apex, inl, inr, f.left, g.left),
            copair(apex, inl, inr, f.right, g.right),
        )
        i1 = SpanSquare(f, s, identity(f.src), identity(f.tgt), inl)
        i2 = SpanSquare(g, s, identity(f.src), identity(f.tgt), inr)

        def cp(sq1: SpanSquare, sq2: SpanSquare) -> SpanSquare:
            if sq1.bottom != sq2.bottom:
                raise BoundaryError("copair: squares target different spans")
            mid = copair(apex, inl, inr, sq1.mid, sq2.mid)
            return SpanSquare(s, sq1.bottom, sq1.u, sq1.v, mid)

        return LocalCoproduct(s, i1, i2, cp)

    # -- equalizers in C_1 -------------------------------------------------
    def equalizer1(self, s1: SpanSquare, s2: SpanSquare) -> Equalizer1:
        if s1.top != s2.top or s1.bottom != s2.bottom:
            raise BoundaryError("equalizer needs a parallel pair of squares")
        if s1.u != s2.u or s1.v != s2.v:
            raise BoundaryError("equalizer needs equal vertical boundaries")
        t = s1.top
        kept = tuple(a for a in t.apex if s1.mid(a) == s2.mid(a))
        apex = FinSet(kept)
        incl = FinFun(apex, t.apex, kept)
        e = Span(t.src, t.tgt, apex, compose_fun(t.left, incl), compose_fun(t.right, incl))
        theta = SpanSquare(e, t, identity(t.src), identity(t.tgt), incl)

        def mediate(sq: SpanSquare) -> SpanSquare:
            if sq.bottom != t:
                raise BoundaryError("mediating square must land in the pair's source")
            table = {}
            for a in sq.top.apex:
                b = sq.mid(a)
                if b not in apex:
                    raise BoundaryError(f"square does not equalize at {b!r}")
                table[a] = b
            return SpanSquare(sq.top, e, sq.u, sq.v, FinFun(sq.top.apex, apex, table))

        return Equalizer1(e, theta, mediate)

    # -- free monads in the horizontal 2-category --------------------------
    def free_monad(self, p: Span, bound: Optional[int] = None) -> FreeMonadInH:
        cat, iota, exact = free_category(Graph.from_span(p), bound or self.free_bound)
        if not exact:
            return FreeMonadInH(p, cat.morphisms, cat.mult, cat.unit, iota, False)
        return FreeMonadInH(p, cat.morphisms, cat.mult, cat.unit, iota, True)

    def free_sharp(self, free: FreeMonadInH, target: HorMonad, f: Span, phi: SpanSquare):
        return sharp_lift_span(free, target, f, phi)


# ---------------------------------------------------------------------------
# Graphs, free categories, path algebra


@dataclass(frozen=True)
class Graph:
    nodes: FinSet
    edges: Span  # endomorphism span on nodes; left = source, right = target

    def __post_init__(self):
        if self.edges.src != self.nodes or self.edges.tgt != self.nodes:
            raise BoundaryError("graph edges must form an endomorphism span")

    @staticmethod
    def from_span(p: Span) -> "Graph":
        if p.src != p.tgt:
            raise BoundaryError("not an endomorphism span")
        return Graph(p.src, p)

    @staticmethod
    def build(nodes, edges) -> "Graph":
        """nodes: iterable of names; edges: iterable of (name, src, tgt)."""
        ns = FinSet(nodes)
        return Graph(ns, span_from_relation(ns, ns, edges))


def _idpath(node: str) -> str:
    return f"id({node})"


def _path_cat(p: str, q: str) -> str:
    """Concatenate two composable path names."""
    if p.startswith("id("):
        return q
    if q.startswith("id("):
        return p
    return f"{p}.{q}"


def _path_edges(p: str) -> list[str]:
    return [] if p.startswith("id(") else p.split(".")


@dataclass(frozen=True)
class FinCategory:
    """A small category presented as a monad-shaped structure on a graph.

    When `exact` is false the morphism span was truncated at the path
    bound: `mult` is None and `overflow` names a composable pair whose
    composite fell outside the bound.
    """

    carrier: Graph
    morphisms: Span
    mult: Optional[SpanSquare]
    unit: SpanSquare
    exact: bool
    overflow: Optional[tuple] = None

    def as_monad(self) -> HorMonad:
        if not self.exact:
            raise BoundaryError("truncated free category has no total composition")
        return HorMonad(self.morphisms, self.mult, self.unit)


def free_category(graph: Graph, max_len: int):
    """The free category on a graph, by path enumeration up to max_len.

    Returns (cat, iota, exact).  Paths are named as dot-joined edge
    sequences, with id(<node>) for the empty paths; composition is
    concatenation, which is defined on every composable pair exactly
    when no new path appears at length max_len.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    edges = graph.edges
    paths = [(_idpath(n), n, n) for n in graph.nodes]
    frontier = list(paths)
    for _length in range(1, max_len + 1):
        new = []
        for pname, psrc, ptgt in frontier:
            for e in edges.apex:
                if edges.left(e) == ptgt:
                    new.append((_path_cat(pname, e), psrc, edges.right(e)))
        paths.extend(new)
        frontier = new
        if not new:
            break
    # Exact iff nothing extends a maximal-length path (no path of length
    # max_len + 1 exists).
    exact = not any(
        edges.left(e) == ptgt for _, _, ptgt in frontier for e in edges.apex
    )
    names = FinSet(p for p, _, _ in paths)
    srcs = FinFun(names, graph.nodes, tuple(s for _, s, _ in paths))
    tgts = FinFun(names, graph.nodes, tuple(t for _, _, t in paths))
    morphisms = Span(graph.nodes, graph.nodes, names, srcs, tgts)

    unit_mid = FinFun(graph.nodes, names, tuple(_idpath(n) for n in graph.nodes))
    unit = SpanSquare(
        id_span(graph.nodes), morphisms, identity(graph.nodes), identity(graph.nodes), unit_mid
    )
    iota_mid = FinFun(edges.apex, names, edges.apex.elements)
    iota = SpanSquare(edges, morphisms, identity(graph.nodes), identity(graph.nodes), iota_mid)

    two = compose_spans(morphisms, morphisms)
    p1, p2 = _comp_projections(two)
    mult_table, overflow = {}, None
    for pair in two.apex:
        cat = _path_cat(p1(pair), p2(pair))
        if cat in names:
            mult_table[pair] = cat
        else:
            overflow = (p1(pair), p2(pair))
    if overflow is None:
        mult = SpanSquare(
            two, morphisms, identity(graph.nodes), identity(graph.nodes),
            FinFun(two.apex, names, mult_table),
        )
        cat_exact = exact
    else:
        mult = None
        cat_exact = False
    cat = FinCategory(graph, morphisms, mult, unit, cat_exact, overflow)
    return cat, iota, cat_exact


def sharp_lift_span(free: FreeMonadInH, target: HorMonad, f: Span, phi: SpanSquare):
    """The unique monad-map lift of an endomorphism map into a monad.

    Given the free category P* on an endomorphism span P, a monad
    (A, M), an arrow F : A -> X and a globular square
    phi : H(P, F) -> H(F, M), produce phi_sharp : H(P*, F) -> H(F, M)
    by recursion on path length: the empty path picks out M's unit and
    each appended edge applies phi and multiplies in M.
    """
    if not free.exact:
        raise BoundaryError("sharp lift needs an exact free category")
    p, star = free.endo, free.star
    m = target.arrow
    top = compose_spans(star, f)
    bottom = compose_spans(f, m)
    expected_phi_top = compose_spans(p, f)
    if phi.top != expected_phi_top or phi.bottom != bottom:
        raise BoundaryError("phi has the wrong boundary for a sharp lift")
    eta_mid = target.unit.mid
    mu_two = target.mult.top
    mu_p1, mu_p2 = _comp_projections(mu_two)
    top_p1, top_p2 = _comp_projections(top)
    bot_p1, bot_p2 = _comp_projections(bottom)
    bot_apex = bottom.apex

    # Value of the lift on a pair (element of F, path), cached by the
    # composite pair name.
    memo: dict[str, str] = {}

    def mu_apply(m1: str, m2: str) -> str:
        return target.mult.mid(pair_name(m1, m2))

    def phi_apply(fel: str, edge: str) -> str:
        return phi.mid(pair_name(fel, edge))

    def value(fel: str, path: str) -> str:
        key = pair_name(fel, path)
        if key in memo:
            return memo[key]
        edges = _path_edges(path)
        if not edges:
            out = pair_name(eta_mid(f.left(fel)), fel)
        else:
            if len(edges) == 1:
                prefix = _idpath(p.left(edges[0]))
            else:
                prefix = ".".join(edges[:-1])
            acc = value(fel, prefix)
            m1, f1 = bot_p1(acc), bot_p2(acc)
            step = phi_apply(f1, edges[-1])
            m2, f2 = bot_p1(step), bot_p2(step)
            out = pair_name(mu_apply(m1, m2), f2)
        assert out in bot_apex
        memo[key] = out
        return out

    table = {}
    for pr in top.apex:
        fel, path = top_p1(pr), top_p2(pr)
        table[pr] = value(fel, path)
    mid = FinFun(top.apex, bot_apex, table)
    return SpanSquare(top, bottom, identity(top.src), identity(top.tgt), mid)


# ---------------------------------------------------------------------------
# Graph text format


class ParseError(Exception):
    def __init__(self, msg, line_no):
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


def parse_graph(text: str) -> Graph:
    """Parse the graph text format:

        graph
        nodes: a b c
        edge f a b
    """
    lines = _content_lines(text)
    if not lines or lines[0][1] != "graph":
        raise ParseError("expected 'graph' header", lines[0][0] if lines else 1)
    nodes, edges = None, []
    for no, line in lines[1:]:
        if line.startswith("nodes:"):
            if nodes is not None:
                raise ParseError("duplicate nodes: line", no)
            nodes = line[len("nodes:"):].split()
        elif line.startswith("edge "):
            parts = line.split()
            if len(parts) != 4:
                raise ParseError("expected: edge <name> <src> <tgt>", no)
            edges.append((parts[1], parts[2], parts[3], no))
        else:
            raise ParseError(f"unrecognized line {line!r}", no)
    if nodes is None:
        raise ParseError("missing nodes: line", lines[0][0])
    for name, a, b, no in edges:
        for n in (a, b):
            if n not in nodes:
                raise ParseError(f"unknown node {n!r} in edge {name!r}", no)
    try:
        return Graph.build(nodes, [(n, a, b) for n, a, b, _ in edges])
    except Exception as exc:  # duplicate names etc.
        raise ParseError(str(exc), lines[0][0])


def _content_lines(text: str):
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out
