"""The double category of polynomials over finite sets.

A polynomial X <- slots -> ops -> Y encodes a sum-of-products functor
between slice categories; its squares are the cartesian morphisms (the
central region is a pullback, equivalently the slot map is a bijection
on each operation's fiber).  Endomorphism polynomials have free monads
given by wellfounded trees, computed here by saturating tree depth.

Composite polynomials name their operations as (outer-op | assignment)
pairs and their slots as (composite-op | outer-slot | inner-slot)
triples; that metadata is kept on the arrow (`origin`) and drives the
structural associator and unitors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .finset import (
    FinFun,
    FinSet,
    SliceObject,
    compose_fun,
    compose_slice,
    coproduct,
    copair,
    dependent_product,
    fiber,
    identity,
    pullback_slice,
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
class Polynomial:
    src: FinSet
    tgt: FinSet
    slots: FinSet
    ops: FinSet
    sigma: FinFun  # slots -> src
    theta: FinFun  # slots -> ops
    tau: FinFun  # ops -> tgt
    origin: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.sigma.dom != self.slots or self.sigma.cod != self.src:
            raise BoundaryError("polynomial: sigma has wrong boundaries")
        if self.theta.dom != self.slots or self.theta.cod != self.ops:
            raise BoundaryError("polynomial: theta has wrong boundaries")
        if self.tau.dom != self.ops or self.tau.cod != self.tgt:
            raise BoundaryError("polynomial: tau has wrong boundaries")

    def arity(self, b: str) -> int:
        return len(fiber(self.theta, b))

    def op_slots(self, b: str) -> FinSet:
        return fiber(self.theta, b)

    def __repr__(self):
        return f"Poly({self.src}<-{self.slots}->{self.ops}->{self.tgt})"


@dataclass(frozen=True)
class PolySquare:
    top: Polynomial
    bottom: Polynomial
    u: FinFun
    v: FinFun
    phi: FinFun  # top.ops -> bottom.ops
    phibar: FinFun  # top.slots -> bottom.slots

    def __post_init__(self):
        t, b = self.top, self.bottom
        if self.u.dom != t.src or self.u.cod != b.src:
            raise BoundaryError("poly square: left vertical has wrong boundaries")
        if self.v.dom != t.tgt or self.v.cod != b.tgt:
            raise BoundaryError("poly square: right vertical has wrong boundaries")
        if self.phi.dom != t.ops or self.phi.cod != b.ops:
            raise BoundaryError("poly square: phi has wrong boundaries")
        if self.phibar.dom != t.slots or self.phibar.cod != b.slots:
            raise BoundaryError("poly square: phibar has wrong boundaries")
        if compose_fun(b.sigma, self.phibar) != compose_fun(self.u, t.sigma):
            raise BoundaryError("poly square: source region does not commute")
        if compose_fun(b.tau, self.phi) != compose_fun(self.v, t.tau):
            raise BoundaryError("poly square: target region does not commute")
        if compose_fun(b.theta, self.phibar) != compose_fun(self.phi, t.theta):
            raise BoundaryError("poly square: central region does not commute")
        # Cartesianness: the central region must be a pullback, i.e. the
        # slot map restricts to a bijection on each operation's fiber.
        for op in t.ops:
            src_fib = t.op_slots(op)
            tgt_fib = b.op_slots(self.phi(op))
            image = [self.phibar(e) for e in src_fib]
            if len(set(image)) != len(image) or set(image) != set(tgt_fib.elements):
                raise BoundaryError(
                    f"poly square: slot map is not bijective on fiber of {op!r}"
                )

    def fiber_inverse(self, op: str) -> dict:
        """Invert phibar on the slot fiber of a top operation."""
        return {self.phibar(e): e for e in self.top.op_slots(op)}


def id_poly(x: FinSet) -> Polynomial:
    i = identity(x)
    return Polynomial(x, x, x, x, i, i, i, origin=("id", x))


def comp_op_name(q: str, ps) -> str:
    return f"({q}|{','.join(ps)})"


def comp_slot_name(op_name: str, j: str, e: str) -> str:
    return f"({op_name}|{j}|{e})"


def compose_polys(q: Polynomial, p: Polynomial) -> Polynomial:
    """q after p.

    An operation of the composite is an operation of q together with an
    assignment of a p-operation to each of its slots (matching types);
    its slots are the disjoint union of the assigned operations' slots.
    """
    if p.tgt != q.src:
        raise BoundaryError(f"cannot compose polynomials: {p.tgt} != {q.src}")
    op_names, op_split = [], {}
    slot_names, slot_split = [], {}
    sigma_t, theta_t, tau_t = [], [], []
    for qop in q.ops:
        jslots = q.op_slots(qop)
        cands = [
            [pop for pop in p.ops if p.tau(pop) == q.sigma(j)] for j in jslots
        ]
        for combo in itertools.product(*cands):
            name = comp_op_name(qop, combo)
            op_names.append(name)
            op_split[name] = (qop, tuple(zip(jslots, combo)))
            tau_t.append(q.tau(qop))
            for j, pop in zip(jslots, combo):
                for e in p.op_slots(pop):
                    sname = comp_slot_name(name, j, e)
                    slot_names.append(sname)
                    slot_split[sname] = (name, j, e)
                    sigma_t.append(p.sigma(e))
                    theta_t.append(name)
    ops = FinSet(op_names)
    slots = FinSet(slot_names)
    return Polynomial(
        p.src,
        q.tgt,
        slots,
        ops,
        FinFun(slots, p.src, tuple(sigma_t)),
        FinFun(slots, ops, tuple(theta_t)),
        FinFun(ops, q.tgt, tuple(tau_t)),
        origin=("comp", q, p, op_split, slot_split),
    )


def _comp_splits(f: Polynomial):
    assert f.origin is not None and f.origin[0] == "comp"
    return f.origin[3], f.origin[4]


# ---------------------------------------------------------------------------
# Extensional evaluation


def _eval_elt_name(b: str, graph) -> str:
    return f"[{b}|{','.join(f'{e}:{v}' for e, v in graph)}]"


def evaluate_poly(p: Polynomial, x: SliceObject) -> SliceObject:
    """The sum-over-operations, product-over-slots formula."""
    if x.base != p.src:
        raise BoundaryError("slice base does not match polynomial source")
    names, proj = [], []
    for b in p.ops:
        slots = p.op_slots(b)
        choices = [list(x.fiber(p.sigma(e))) for e in slots]
        for combo in itertools.product(*choices):
            names.append(_eval_elt_name(b, list(zip(slots, combo))))
            proj.append(p.tau(b))
    total = FinSet(names)
    return SliceObject(total, p.tgt, FinFun(total, p.tgt, tuple(proj)))


def evaluate_poly_slicewise(p: Polynomial, x: SliceObject) -> SliceObject:
    """The same functor computed as a composite of slice functors
    (pullback along sigma, dependent product along theta, composition
    with tau); an independent oracle for evaluate_poly."""
    pulled = pullback_slice(p.sigma, x)
    prodd = dependent_product(p.theta, pulled)
    return compose_slice(p.tau, prodd)


def compose_eval_bijection(q: Polynomial, p: Polynomial, x: SliceObject) -> FinFun:
    """The structural bijection
    evaluate(compose(q,p), x) -> evaluate(q, evaluate(p, x)),
    decoded from the composite's operation metadata.  It commutes with
    the projections by construction; callers verify bijectivity."""
    qp = compose_polys(q, p)
    lhs = evaluate_poly(qp, x)
    mid = evaluate_poly(p, x)
    rhs = evaluate_poly(q, mid)
    op_split, _ = _comp_splits(qp)
    table = {}
    for b in qp.ops:
        qop, asg = op_split[b]
        slots = qp.op_slots(b)
        choices = [list(x.fiber(qp.sigma(e))) for e in slots]
        for combo in itertools.product(*choices):
            lhs_name = _eval_elt_name(b, list(zip(slots, combo)))
            chosen = dict(zip(slots, combo))
            inner = []
            for j, pop in asg:
                graph = [
                    (e, chosen[comp_slot_name(b, j, e)]) for e in p.op_slots(pop)
                ]
                inner.append((j, _eval_elt_name(pop, graph)))
            table[lhs_name] = _eval_elt_name(qop, inner)
    return FinFun(lhs.total, rhs.total, table)


# ---------------------------------------------------------------------------
# The double-category instance


class PolyInstance(dc.DoubleCategory):
    name = "poly"
    has_framed = True
    has_local_coproducts = True
    has_equalizers = True
    has_free_monads = True

    def __init__(self, free_bound: int = 8):
        self.free_bound = free_bound

    def hsrc(self, f: Polynomial):
        return f.src

    def htgt(self, f: Polynomial):
        return f.tgt

    def hid(self, x: FinSet):
        return id_poly(x)

    def hcomp(self, g: Polynomial, f: Polynomial):
        return compose_polys(g, f)

    def vsrc(self, u: FinFun):
        return u.dom

    def vtgt(self, u: FinFun):
        return u.cod

    def vid(self, x: FinSet):
        return identity(x)

    def vcomp(self, v: FinFun, u: FinFun):
        return compose_fun(v, u)

    def sq_top(self, s: PolySquare):
        return s.top

    def sq_bottom(self, s: PolySquare):
        return s.bottom

    def sq_left(self, s: PolySquare):
        return s.u

    def sq_right(self, s: PolySquare):
        return s.v

    def sq_vid(self, f: Polynomial):
        return PolySquare(
            f, f, identity(f.src), identity(f.tgt), identity(f.ops), identity(f.slots)
        )

    def sq_hid(self, u: FinFun):
        return PolySquare(id_poly(u.dom), id_poly(u.cod), u, u, u, u)

    def sq_hcomp(self, s2: PolySquare, s1: PolySquare):
        if s1.top.tgt != s2.top.src or s1.bottom.tgt != s2.bottom.src:
            raise BoundaryError("horizontal composite: polynomials do not align")
        if s1.v != s2.u:
            raise BoundaryError("horizontal composite: middle verticals differ")
        top = compose_polys(s2.top, s1.top)
        bottom = compose_polys(s2.bottom, s1.bottom)
        t_opsplit, t_slotsplit = _comp_splits(top)
        phi_t, phibar_t = {}, {}
        for name in top.ops:
            qop, asg = t_opsplit[name]
            asg_d = dict(asg)
            qhat = s2.phi(qop)
            inv = s2.fiber_inverse(qop)
            combo = [
                s1.phi(asg_d[inv[jh]]) for jh in s2.bottom.op_slots(qhat)
            ]
            phi_t[name] = comp_op_name(qhat, combo)
        for sname in top.slots:
            name, j, e = t_slotsplit[sname]
            phibar_t[sname] = comp_slot_name(
                phi_t[name], s2.phibar(j), s1.phibar(e)
            )
        return PolySquare(
            top,
            bottom,
            s1.u,
            s2.v,
            FinFun(top.ops, bottom.ops, phi_t),
            FinFun(top.slots, bottom.slots, phibar_t),
        )

    def sq_vcomp(self, s2: PolySquare, s1: PolySquare):
        if s1.bottom != s2.top:
            raise BoundaryError("vertical composite: middle arrows differ")
        return PolySquare(
            s1.top,
            s2.bottom,
            compose_fun(s2.u, s1.u),
            compose_fun(s2.v, s1.v),
            compose_fun(s2.phi, s1.phi),
            compose_fun(s2.phibar, s1.phibar),
        )

    # -- coherence --------------------------------------------------------
    def _globular(self, top, bottom, phi_t, phibar_t) -> PolySquare:
        return PolySquare(
            top,
            bottom,
            identity(top.src),
            identity(top.tgt),
            FinFun(top.ops, bottom.ops, phi_t),
            FinFun(top.slots, bottom.slots, phibar_t),
        )

    def associator(self, h: Polynomial, g: Polynomial, f: Polynomial) -> Iso:
        lhs = compose_polys(compose_polys(h, g), f)  # (h.g).f
        rhs = compose_polys(h, compose_polys(g, f))  # h.(g.f)
        hg = lhs.origin[1]
        gf = rhs.origin[2]
        a_opsplit, a_slotsplit = _comp_splits(lhs)
        hg_opsplit, hg_slotsplit = _comp_splits(hg)
        phi_t, phibar_t = {}, {}
        # Per-op bookkeeping for the slot relabeling.
        inner_names: dict[str, dict] = {}
        for na in lhs.ops:
            nhg, fasg = a_opsplit[na]
            fasg_d = dict(fasg)
            hop, gasg = hg_opsplit[nhg]
            gf_per_j = {}
            for j, gop in gasg:
                inner = [
                    fasg_d[comp_slot_name(nhg, j, m)] for m in g.op_slots(gop)
                ]
                gf_per_j[j] = comp_op_name(gop, inner)
            nb = comp_op_name(hop, [gf_per_j[j] for j, _ in gasg])
            phi_t[na] = nb
            inner_names[na] = gf_per_j
        for sname in lhs.slots:
            na, s_hg, e = a_slotsplit[sname]
            _, j, m = hg_slotsplit[s_hg]
            nb = phi_t[na]
            n_gf = inner_names[na][j]
            phibar_t[sname] = comp_slot_name(nb, j, comp_slot_name(n_gf, m, e))
        fwd = self._globular(lhs, rhs, phi_t, phibar_t)
        inv = self._globular(
            rhs,
            lhs,
            {phi_t[k]: k for k in phi_t},
            {phibar_t[k]: k for k in phibar_t},
        )
        return Iso(fwd, inv)

    def lunitor(self, f: Polynomial) -> Iso:
        comp = compose_polys(id_poly(f.tgt), f)
        opsplit, slotsplit = _comp_splits(comp)
        phi_t = {name: opsplit[name][1][0][1] for name in comp.ops}
        phibar_t = {s: slotsplit[s][2] for s in comp.slots}
        fwd = self._globular(comp, f, phi_t, phibar_t)
        inv = self._globular(
            f, comp, {v: k for k, v in phi_t.items()}, {v: k for k, v in phibar_t.items()}
        )
        return Iso(fwd, inv)

    def runitor(self, f: Polynomial) -> Iso:
        comp = compose_polys(f, id_poly(f.src))
        opsplit, slotsplit = _comp_splits(comp)
        phi_t = {name: opsplit[name][0] for name in comp.ops}
        # The composite slot over (p, e) is (name | e | sigma(e)).
        phibar_t = {s: slotsplit[s][1] for s in comp.slots}
        fwd = self._globular(comp, f, phi_t, phibar_t)
        inv_phi = {v: k for k, v in phi_t.items()}
        inv_phibar = {}
        for s in comp.slots:
            name, j, _ = slotsplit[s]
            inv_phibar[j] = s
        inv = self._globular(f, comp, inv_phi, inv_phibar)
        return Iso(fwd, inv)

    def hor_isos(self, f: Polynomial, g: Polynomial):
        """All invertible globular squares f -> g."""
        if f.src != g.src or f.tgt != g.tgt:
            return
        if len(f.ops) != len(g.ops) or len(f.slots) != len(g.slots):
            return
        yield from self._square_search(f, g, identity(f.src), identity(f.tgt), bijective=True)

    def enumerate_squares(self, top, bottom, u, v):
        for sq in self._square_search(top, bottom, u, v, bijective=False):
            yield sq

    def _square_search(self, top, bottom, u, v, bijective):
        """Backtracking enumeration of squares with the given boundary;
        with bijective=True only invertible globular squares are
        produced, wrapped as Iso pairs."""
        op_cands = []
        for b in top.ops:
            cands = []
            for b2 in bottom.ops:
                if bottom.tau(b2) != v(top.tau(b)):
                    continue
                fibs = self._fiber_bijections(top, bottom, u, b, b2)
                if fibs:
                    cands.append((b2, fibs))
            if not cands:
                return
            op_cands.append((b, cands))

        n = len(op_cands)
        chosen: list[tuple] = []

        def extend(i):
            if i == n:
                phi_t, phibar_t = {}, {}
                for (b, _), (b2, fibmap) in zip(op_cands, chosen):
                    phi_t[b] = b2
                    phibar_t.update(fibmap)
                if bijective and len(set(phi_t.values())) != len(phi_t):
                    return
                sq = PolySquare(
                    top,
                    bottom,
                    u,
                    v,
                    FinFun(top.ops, bottom.ops, phi_t),
                    FinFun(top.slots, bottom.slots, phibar_t),
                )
                if bijective:
                    inv = PolySquare(
                        bottom, top, u, v, sq.phi.inverse(), sq.phibar.inverse()
                    )
                    yield Iso(sq, inv)
                else:
                    yield sq
                return
            b, cands = op_cands[i]
            for b2, fibs in cands:
                if bijective and any(c[0] == b2 for c in chosen):
                    continue
                for fibmap in fibs:
                    chosen.append((b2, fibmap))
                    yield from extend(i + 1)
                    chosen.pop()

        yield from extend(0)

    @staticmethod
    def _fiber_bijections(top, bottom, u, b, b2):
        """All source-compatible bijections from the slot fiber of b to
        the slot fiber of b2, as {slot: slot} dicts."""
        src_fib = top.op_slots(b)
        tgt_fib = bottom.op_slots(b2)
        if len(src_fib) != len(tgt_fib):
            return []
        out = []
        cands = [
            [e2 for e2 in tgt_fib if bottom.sigma(e2) == u(top.sigma(e))]
            for e in src_fib
        ]
        def extend(i, used, acc):
            if i == len(src_fib):
                out.append(dict(zip(src_fib, acc)))
                return
            for e2 in cands[i]:
                if e2 in used:
                    continue
                extend(i + 1, used | {e2}, acc + [e2])
        extend(0, frozenset(), [])
        return out

    # -- framing ----------------------------------------------------------
    def framed(self, u: FinFun) -> FramedArrow:
        x, x1 = u.dom, u.cod
        i_x, i_x1 = identity(x), identity(x1)
        companion = Polynomial(x, x1, x, x, i_x, i_x, u)
        conjoint = Polynomial(x1, x, x, x, u, i_x, i_x)
        alpha = PolySquare(companion, id_poly(x1), u, i_x1, u, u)
        beta = PolySquare(conjoint, id_poly(x1), i_x1, u, u, u)
        gamma = PolySquare(id_poly(x), conjoint, u, i_x, i_x, i_x)
        delta = PolySquare(id_poly(x), companion, i_x, u, i_x, i_x)
        return FramedArrow(u, companion, conjoint, alpha, beta, gamma, delta)

    def recognize_conjoint(self, f: Polynomial) -> Optional[FinFun]:
        if (
            f.tgt == f.ops == f.slots
            and f.theta.is_identity()
            and f.tau.is_identity()
        ):
            return f.sigma
        return None

    # -- local coproducts --------------------------------------------------
    def local_coproduct(self, f: Polynomial, g: Polynomial) -> LocalCoproduct:
        if f.src != g.src or f.tgt != g.tgt:
            raise BoundaryError("local coproduct needs parallel polynomials")
        ops, op_inl, op_inr = coproduct(f.ops, g.ops)
        slots, sl_inl, sl_inr = coproduct(f.slots, g.slots)
        s = Polynomial(
            f.src,
            f.tgt,
            slots,
            ops,
            copair(slots, sl_inl, sl_inr, f.sigma, g.sigma),
            copair(slots, sl_inl, sl_inr,
                   compose_fun(op_inl, f.theta), compose_fun(op_inr, g.theta)),
            copair(ops, op_inl, op_inr, f.tau, g.tau),
        )
        i1 = PolySquare(f, s, identity(f.src), identity(f.tgt), op_inl, sl_inl)
        i2 = PolySquare(g, s, identity(f.src), identity(f.tgt), op_inr, sl_inr)

        def cp(sq1: PolySquare, sq2: PolySquare) -> PolySquare:
            if sq1.bottom != sq2.bottom:
                raise BoundaryError("copair: squares target different polynomials")
            return PolySquare(
                s,
                sq1.bottom,
                sq1.u,
                sq1.v,
                copair(ops, op_inl, op_inr, sq1.phi, sq2.phi),
                copair(slots, sl_inl, sl_inr, sq1.phibar, sq2.phibar),
            )

        return LocalCoproduct(s, i1, i2, cp)

    # -- equalizers in C_1 -------------------------------------------------
    def equalizer1(self, s1: PolySquare, s2: PolySquare) -> Equalizer1:
        if s1.top != s2.top or s1.bottom != s2.bottom:
            raise BoundaryError("equalizer needs a parallel pair of squares")
        if s1.u != s2.u or s1.v != s2.v:
            raise BoundaryError("equalizer needs equal vertical boundaries")
        t = s1.top
        kept_ops = tuple(
            b
            for b in t.ops
            if s1.phi(b) == s2.phi(b)
            and all(s1.phibar(e) == s2.phibar(e) for e in t.op_slots(b))
        )
        ops = FinSet(kept_ops)
        kept_slots = tuple(e for e in t.slots if t.theta(e) in ops)
        slots = FinSet(kept_slots)
        op_incl = FinFun(ops, t.ops, kept_ops)
        slot_incl = FinFun(slots, t.slots, kept_slots)
        e = Polynomial(
            t.src,
            t.tgt,
            slots,
            ops,
            compose_fun(t.sigma, slot_incl),
            FinFun(slots, ops, tuple(t.theta(s) for s in kept_slots)),
            compose_fun(t.tau, op_incl),
        )
        theta = PolySquare(e, t, identity(t.src), identity(t.tgt), op_incl, slot_incl)

        def mediate(sq: PolySquare) -> PolySquare:
            if sq.bottom != t:
                raise BoundaryError("mediating square must land in the pair's source")
            phi_t, phibar_t = {}, {}
            for b in sq.top.ops:
                img = sq.phi(b)
                if img not in ops:
                    raise BoundaryError(f"square does not equalize at op {img!r}")
                phi_t[b] = img
            for s in sq.top.slots:
                phibar_t[s] = sq.phibar(s)
            return PolySquare(
                sq.top,
                e,
                sq.u,
                sq.v,
                FinFun(sq.top.ops, ops, phi_t),
                FinFun(sq.top.slots, slots, phibar_t),
            )

        return Equalizer1(e, theta, mediate)

    # -- free monads -------------------------------------------------------
    def free_monad(self, p: Polynomial, bound: Optional[int] = None) -> FreeMonadInH:
        fm = free_poly_monad(p, bound or self.free_bound)
        return FreeMonadInH(p, fm.star, fm.mult, fm.unit, fm.iota, fm.exact)

    def free_sharp(self, free: FreeMonadInH, target: HorMonad, f, phi):
        return sharp_lift_poly(free, target, f, phi)


# ---------------------------------------------------------------------------
# Wellfounded trees


@dataclass(frozen=True)
class Tree:
    """Either a hole typed by an element of the base, or a node labeled
    by an operation with one well-typed subtree per slot."""

    hole: Optional[str]
    op: Optional[str]
    children: tuple  # (slot, Tree) pairs, in slot order

    @staticmethod
    def mk_hole(y: str) -> "Tree":
        return Tree(y, None, ())

    @staticmethod
    def mk_node(op: str, children) -> "Tree":
        return Tree(None, op, tuple(children))

    @property
    def name(self) -> str:
        if self.hole is not None:
            return f"~{self.hole}"
        return f"{self.op}({','.join(t.name for _, t in self.children)})"

    def output(self, q: Polynomial) -> str:
        if self.hole is not None:
            return self.hole
        return q.tau(self.op)

    def depth(self) -> int:
        if self.hole is not None:
            return 0
        return 1 + max((t.depth() for _, t in self.children), default=0)

    def leaves(self):
        """Ordered (position, hole-type) pairs."""
        if self.hole is not None:
            return [("*", self.hole)]
        out = []
        for e, t in self.children:
            for pos, y in t.leaves():
                out.append((_pos_join(e, pos), y))
        return out

    def graft(self, assignment: dict) -> "Tree":
        """Substitute a tree for each leaf, by position."""
        if self.hole is not None:
            return assignment["*"]
        new_children = []
        for e, t in self.children:
            sub = {
                pos: assignment[_pos_join(e, pos)] for pos, _ in t.leaves()
            }
            new_children.append((e, t.graft(sub)))
        return Tree.mk_node(self.op, new_children)


def _pos_join(e: str, pos: str) -> str:
    return e if pos == "*" else f"{e}/{pos}"


def _leaf_name(tree_name: str, pos: str) -> str:
    return f"{tree_name}@{pos}"


@dataclass(frozen=True)
class FreePolyMonad:
    endo: Polynomial
    star: Polynomial
    mult: Optional[PolySquare]
    unit: PolySquare
    iota: PolySquare
    exact: bool
    trees: dict  # name -> Tree
    overflow: Optional[tuple] = None

    def as_monad(self) -> HorMonad:
        if not self.exact:
            raise BoundaryError("truncated free monad has no total multiplication")
        return HorMonad(self.star, self.mult, self.unit)


def saturate_trees(q: Polynomial, max_depth: int):
    """All wellfounded trees of profile q up to the depth bound, listed
    shallowest first.  Returns (ordered names, registry, exact)."""
    if q.src != q.tgt:
        raise BoundaryError("free monad needs an endomorphism polynomial")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    registry: dict[str, Tree] = {}
    ordered: list[str] = []
    by_output: dict[str, list[str]] = {y: [] for y in q.tgt}

    def add(t: Tree) -> bool:
        nm = t.name
        if nm in registry:
            return False
        registry[nm] = t
        ordered.append(nm)
        by_output[t.output(q)].append(nm)
        return True

    for y in q.tgt:
        add(Tree.mk_hole(y))
    exact = False
    for _depth in range(1, max_depth + 1):
        grew = False
        for b in q.ops:
            slots = q.op_slots(b)
            cands = [list(by_output[q.sigma(e)]) for e in slots]
            for combo in itertools.product(*cands):
                t = Tree.mk_node(b, list(zip(slots, (registry[c] for c in combo))))
                if t.depth() <= _depth and add(t):
                    grew = True
        if not grew:
            exact = True
            break
    return ordered, registry, exact


def free_poly_monad(q: Polynomial, max_depth: int) -> FreePolyMonad:
    """The free monad on an endomorphism polynomial, via tree saturation.

    star's operations are the trees, its slots their leaves; the unit
    is given by the hole trees, iota by the depth-one trees, and the
    multiplication by grafting.  When saturation does not stabilize
    within the depth bound the result is flagged truncated and has no
    total multiplication.
    """
    ordered, registry, exact = saturate_trees(q, max_depth)
    names = FinSet(ordered)
    slot_names, sigma_t, theta_t = [], [], []
    for nm in ordered:
        for pos, y in registry[nm].leaves():
            slot_names.append(_leaf_name(nm, pos))
            sigma_t.append(y)
            theta_t.append(nm)
    slots = FinSet(slot_names)
    star = Polynomial(
        q.src,
        q.tgt,
        slots,
        names,
        FinFun(slots, q.src, tuple(sigma_t)),
        FinFun(slots, names, tuple(theta_t)),
        FinFun(names, q.tgt, tuple(registry[nm].output(q) for nm in ordered)),
    )

    y = q.tgt
    unit = PolySquare(
        id_poly(y),
        star,
        identity(y),
        identity(y),
        FinFun(y, names, tuple(f"~{v}" for v in y)),
        FinFun(y, slots, tuple(_leaf_name(f"~{v}", "*") for v in y)),
    )

    iota_phi, iota_phibar = {}, {}
    for b in q.ops:
        t = Tree.mk_node(
            b, [(e, Tree.mk_hole(q.sigma(e))) for e in q.op_slots(b)]
        )
        iota_phi[b] = t.name
        for e in q.op_slots(b):
            iota_phibar[e] = _leaf_name(t.name, e)
    iota = PolySquare(
        q,
        star,
        identity(y),
        identity(y),
        FinFun(q.ops, names, iota_phi),
        FinFun(q.slots, slots, iota_phibar),
    )

    two = compose_polys(star, star)
    opsplit, slotsplit = _comp_splits(two)
    mult, overflow = None, None
    phi_t, phibar_t = {}, {}
    for name in two.ops:
        outer, asg = opsplit[name]
        t = registry[outer]
        graft_asg = {
            pos: registry[dict(asg)[_leaf_name(outer, pos)]]
            for pos, _ in t.leaves()
        }
        grafted = t.graft(graft_asg)
        if grafted.name not in registry:
            overflow = (outer, dict(asg))
            break
        phi_t[name] = grafted.name
    if overflow is None:
        for sname in two.slots:
            name, j, e = slotsplit[sname]
            # j is a leaf of the outer tree, e a leaf of the grafted-in
            # tree; the image leaf sits at the joined position.
            outer_pos = j.split("@", 1)[1]
            inner_pos = e.split("@", 1)[1]
            pos = inner_pos if outer_pos == "*" else (
                outer_pos if inner_pos == "*" else f"{outer_pos}/{inner_pos}"
            )
            phibar_t[sname] = _leaf_name(phi_t[name], pos)
        mult = PolySquare(
            two,
            star,
            identity(y),
            identity(y),
            FinFun(two.ops, names, phi_t),
            FinFun(two.slots, slots, phibar_t),
        )
    cat_exact = exact and overflow is None
    return FreePolyMonad(q, star, mult, unit, iota, cat_exact, registry, overflow)


def sharp_lift_poly(free: FreeMonadInH, target: HorMonad, f: Polynomial, phi: PolySquare):
    """The unique monad-map lift of an endomorphism map into a monad.

    Given the free monad Q* on an endomorphism polynomial Q, a monad
    (A, M), an arrow F : A -> Y and a globular square
    phi : H(Q, F) -> H(F, M), produce phi_sharp : H(Q*, F) -> H(F, M)
    by structural recursion on trees: holes pick out M's unit, nodes
    apply phi at the root and collapse the children with M's mult.
    """
    if not free.exact:
        raise BoundaryError("sharp lift needs an exact free monad")
    q, star = free.endo, free.star
    m = target.arrow
    top = compose_polys(star, f)
    bottom = compose_polys(f, m)
    if phi.top != compose_polys(q, f) or phi.bottom != bottom:
        raise BoundaryError("phi has the wrong boundary for a sharp lift")
    top_opsplit, top_slotsplit = _comp_splits(top)
    bot_opsplit, bot_slotsplit = _comp_splits(bottom)
    qf_opsplit, qf_slotsplit = _comp_splits(phi.top)
    mm = target.mult.top  # H(M, M)
    mm_opsplit, mm_slotsplit = _comp_splits(mm)

    # The recursion computes, for each top operation, its image
    # operation together with the slot-level map (top slot -> bottom
    # slot of the image).
    memo: dict[str, tuple[str, dict]] = {}

    def eval_op(name: str) -> tuple[str, dict]:
        if name in memo:
            return memo[name]
        tname, asg = top_opsplit[name]
        asg_d = dict(asg)
        tree = _tree_from_name(q, tname)
        if tree.hole is not None:
            # (hole | f0): unit clause via M's eta.
            f0 = asg_d[_leaf_name(tname, "*")]
            combo, slotmap = [], {}
            for e in f.op_slots(f0):
                eta_op = target.unit.phi(f.sigma(e))
                combo.append(eta_op)
                tslot = comp_slot_name(name, _leaf_name(tname, "*"), e)
                slotmap[tslot] = (e, target.unit.phibar(f.sigma(e)))
            out_op = comp_op_name(f0, combo)
            table = {
                ts: comp_slot_name(out_op, ej, s) for ts, (ej, s) in slotmap.items()
            }
            memo[name] = (out_op, table)
            return memo[name]

        # Node: recurse on children, then fold with phi and mu.
        b = tree.op
        child_results = {}
        child_ops = {}
        for e, sub in tree.children:
            sub_name = sub.name
            sub_asg = []
            for pos, _ in sub.leaves():
                leaf = _leaf_name(sub_name, pos)
                sub_asg.append((leaf, asg_d[_leaf_name(tname, _pos_join(e, pos))]))
            sub_op = comp_op_name(sub_name, [p for _, p in sub_asg])
            child_ops[e] = sub_op
            child_results[e] = eval_op(sub_op)

        # Apply phi at the root: the H(Q,F)-op (b | child underlying F-ops).
        qf_op = comp_op_name(b, [bot_opsplit[child_results[e][0]][0]
                                 for e in q.op_slots(b)])
        root_img = phi.phi(qf_op)  # (f' | m-asg)
        fprime, root_masg = bot_opsplit[root_img]
        root_masg_d = dict(root_masg)
        inv = phi.fiber_inverse(qf_op)

        combo, final_slot = [], {}
        for eprime in f.op_slots(fprime):
            m1 = root_masg_d[eprime]
            # Build the inner assignment of the H(M,M)-op (m1 | ...).
            inner = []
            for s in m.op_slots(m1):
                back = inv[comp_slot_name(root_img, eprime, s)]
                _, e_b, e_f = qf_slotsplit[back]
                sub_out, sub_table = child_results[e_b]
                _, sub_masg = bot_opsplit[sub_out]
                m_inner = dict(sub_masg)[e_f]
                inner.append((s, m_inner))
            mm_op = comp_op_name(m1, [mi for _, mi in inner])
            mu_img = target.mult.phi(mm_op)
            combo.append(mu_img)
            # Slot threading: a bottom slot of mu_img pulls back through
            # mu's fiber bijection to a slot of some inner m-op, which the
            # child's table connects to a top slot.
            mu_inv = target.mult.fiber_inverse(mm_op)
            for s_out in m.op_slots(mu_img):
                mm_slot = mu_inv[s_out]
                _, s1, s2 = mm_slotsplit[mm_slot]
                back = inv[comp_slot_name(root_img, eprime, s1)]
                _, e_b, e_f = qf_slotsplit[back]
                sub_out, _ = child_results[e_b]
                # find the child top slot mapping to (sub_out | e_f | s2)
                final_slot[(eprime, s_out)] = (e_b, comp_slot_name(sub_out, e_f, s2))
        out_op = comp_op_name(fprime, combo)
        table = {}
        for (eprime, s_out), (e_b, child_bot_slot) in final_slot.items():
            _, child_table = child_results[e_b]
            matches = [ts for ts, bs in child_table.items() if bs == child_bot_slot]
            assert len(matches) == 1
            # Relabel the child's top slot as a slot of the parent op.
            _, leaf, e_f2 = top_slotsplit[matches[0]]
            pos = leaf.split("@", 1)[1]
            parent_leaf = _leaf_name(tname, _pos_join(e_b, pos))
            table[comp_slot_name(name, parent_leaf, e_f2)] = comp_slot_name(
                out_op, eprime, s_out
            )
        memo[name] = (out_op, table)
        return memo[name]

    phi_t, phibar_t = {}, {}
    for name in top.ops:
        out_op, table = eval_op(name)
        phi_t[name] = out_op
        phibar_t.update(table)
    return PolySquare(
        top,
        bottom,
        identity(top.src),
        identity(top.tgt),
        FinFun(top.ops, bottom.ops, phi_t),
        FinFun(top.slots, bottom.slots, phibar_t),
    )


def _tree_from_name(q: Polynomial, name: str) -> Tree:
    """Reconstruct a tree from its printed name, reattaching q's slot
    names to the children."""
    if name.startswith("~"):
        return Tree.mk_hole(name[1:])
    assert name.endswith(")")
    op, rest = name.split("(", 1)
    args = _split_args(rest[:-1])
    slots = q.op_slots(op)
    assert len(args) == len(slots)
    return Tree.mk_node(
        op, [(e, _tree_from_name(q, a)) for e, a in zip(slots, args)]
    )


def _split_args(body: str) -> list[str]:
    """Split a comma-joined argument list at paren depth zero."""
    if not body:
        return []
    out, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(body[start:i])
            start = i + 1
    out.append(body[start:])
    return out


# ---------------------------------------------------------------------------
# Polynomial text format


class ParseError(Exception):
    def __init__(self, msg, line_no):
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


def parse_poly(text: str) -> Polynomial:
    """Parse the polynomial-endomorphism text format:

        poly
        base: y1 y2
        op c : -> y1
        op s y1 y2 : -> y2
    """
    lines = [
        (i, ln)
        for i, raw in enumerate(text.splitlines(), start=1)
        for ln in [raw.split("#", 1)[0].strip()]
        if ln
    ]
    if not lines or lines[0][1] != "poly":
        raise ParseError("expected 'poly' header", lines[0][0] if lines else 1)
    base, ops = None, []
    for no, line in lines[1:]:
        if line.startswith("base:"):
            if base is not None:
                raise ParseError("duplicate base: line", no)
            base = line[len("base:"):].split()
        elif line.startswith("op "):
            head, _, tail = line[3:].partition(":")
            parts = head.split()
            if not parts:
                raise ParseError("op needs a name", no)
            out = tail.replace("->", " ").split()
            if len(out) != 1:
                raise ParseError("expected: op <name> <in...> : -> <out>", no)
            ops.append((parts[0], tuple(parts[1:]), out[0], no))
        else:
            raise ParseError(f"unrecognized line {line!r}", no)
    if base is None:
        raise ParseError("missing base: line", lines[0][0])
    for name, ins, out, no in ops:
        for y in ins + (out,):
            if y not in base:
                raise ParseError(f"unknown base element {y!r} in op {name!r}", no)
    y = FinSet(base)
    op_names = FinSet(n for n, _, _, _ in ops)
    slot_names, sigma_t, theta_t = [], [], []
    for name, ins, _, _ in ops:
        for k, t in enumerate(ins):
            slot_names.append(f"{name}.{k}")
            sigma_t.append(t)
            theta_t.append(name)
    slots = FinSet(slot_names)
    return Polynomial(
        y,
        y,
        slots,
        op_names,
        FinFun(slots, y, tuple(sigma_t)),
        FinFun(slots, op_names, tuple(theta_t)),
        FinFun(op_names, y, tuple(out for _, _, out, _ in ops)),
    )
