"""Brute-force law checking: samplers, enumerators and named suites.

Each suite pastes both sides of the relevant displayed equations on
concrete cells and compares them (strictly or modulo canonical
coherence), collecting failures with fully serialized counterexamples.
Reports are deterministic given their seed and render both a
human-readable block and a stable machine line:

    SUITE <name> PASS|FAIL <checks> <failures> seed=<n>
"""

from __future__ import annotations

import dataclasses
import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from . import doublecat as dc
from . import mnd
from .doublecat import CellPath, DoubleCategory, HorMonad, paste, squares_equal_mod_coherence
from .finset import FinFun, FinSet, all_functions, identity
from .mnd import Endomorphism, MonadObj, VertEndoMap, as_endo
from .span import Span, SpanSquare, compose_spans, id_span, _comp_projections
from .poly import Polynomial, PolySquare, compose_polys, id_poly


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Failure:
    check: str
    detail: str


@dataclass
class LawReport:
    suite: str
    checks: int
    failures: list
    seed: int
    elapsed: float

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"SUITE {self.suite} {verdict} {self.checks} {len(self.failures)} seed={self.seed}"

    def render(self) -> str:
        out = [self.line()]
        for f in self.failures:
            out.append(f"  counterexample [{f.check}]:")
            for ln in f.detail.splitlines():
                out.append(f"    {ln}")
        out.append(f"  elapsed: {self.elapsed:.2f}s")
        return "\n".join(out)


class ReportBuilder:
    def __init__(self, suite: str, seed: int = 0):
        self.suite = suite
        self.seed = seed
        self.checks = 0
        self.failures: list[Failure] = []
        self._t0 = time.monotonic()

    def check(self, name: str, ok: bool, detail: str = ""):
        self.checks += 1
        if not ok:
            self.failures.append(Failure(name, detail))

    def guard(self, name: str, thunk: Callable[[], bool], detail: str = ""):
        """Run a check, converting exceptions into failures."""
        try:
            self.check(name, thunk(), detail)
        except Exception as exc:
            self.checks += 1
            self.failures.append(Failure(name, f"{detail}\nraised: {exc!r}"))

    def done(self) -> LawReport:
        return LawReport(
            self.suite, self.checks, self.failures, self.seed,
            time.monotonic() - self._t0,
        )


def square_well_formed(c: DoubleCategory, s) -> bool:
    """Re-run a square's construction-time validation (spans: leg
    commutation; polynomials: the pullback condition).  Detects cells
    corrupted after construction."""
    try:
        dataclasses.replace(s)
        return True
    except Exception:
        return False


# ---------------------------------------------------------------------------
# Samplers


class SpanSampler:
    """Deterministic random generator of spans and valid span squares."""

    def __init__(self, instance, max_obj: int = 3, max_apex: int = 3, seed: int = 0):
        self.c = instance
        self.max_obj = max_obj
        self.max_apex = max_apex
        self._seed = seed
        self.rng = random.Random(seed)

    def finset(self, prefix: str) -> FinSet:
        n = self.rng.randint(1, self.max_obj)
        return FinSet(f"{prefix}{i}" for i in range(n))

    def fun(self, a: FinSet, b: FinSet) -> FinFun:
        return FinFun(a, b, tuple(self.rng.choice(b.elements) for _ in a))

    def span(self, a: FinSet, b: FinSet, prefix: str = "e") -> Span:
        k = self.rng.randint(0, self.max_apex)
        apex = FinSet(f"{prefix}{i}" for i in range(k))
        return Span(a, b, apex, self.fun(apex, a), self.fun(apex, b))

    def pushforward(self, top: Span, u: FinFun, v: FinFun) -> SpanSquare:
        bottom = Span(
            u.cod, v.cod, top.apex,
            FinFun(top.apex, u.cod, tuple(u(top.left(x)) for x in top.apex)),
            FinFun(top.apex, v.cod, tuple(v(top.right(x)) for x in top.apex)),
        )
        return SpanSquare(top, bottom, u, v, identity(top.apex))

    def square(self) -> SpanSquare:
        a, b = self.finset("a"), self.finset("b")
        top = self.span(a, b)
        u = self.fun(a, self.finset("c"))
        v = self.fun(b, self.finset("d"))
        return self.pushforward(top, u, v)

    def grid2x2(self):
        """Four squares forming a composable 2x2 grid."""
        a, b, cset = self.finset("a"), self.finset("b"), self.finset("c")
        t1, t2 = self.span(a, b, "e"), self.span(b, cset, "g")
        a1, b1, c1 = self.finset("p"), self.finset("q"), self.finset("r")
        u, w, v = self.fun(a, a1), self.fun(b, b1), self.fun(cset, c1)
        s11, s12 = self.pushforward(t1, u, w), self.pushforward(t2, w, v)
        a2, b2, c2 = self.finset("s"), self.finset("t"), self.finset("z")
        u2, w2, v2 = self.fun(a1, a2), self.fun(b1, b2), self.fun(c1, c2)
        s21 = self.pushforward(s11.bottom, u2, w2)
        s22 = self.pushforward(s12.bottom, w2, v2)
        return s11, s12, s21, s22

    def arrow_triple(self):
        a, b, cset, d = (self.finset(p) for p in "abcd")
        return self.span(cset, d, "h"), self.span(b, cset, "g"), self.span(a, b, "e")


class PolySampler:
    """Deterministic random generator of polynomials and cartesian
    squares (relabelings of the base)."""

    def __init__(self, instance, max_obj: int = 2, max_ops: int = 2,
                 max_arity: int = 2, seed: int = 0):
        self.c = instance
        self.max_obj = max_obj
        self.max_ops = max_ops
        self.max_arity = max_arity
        self._seed = seed
        self.rng = random.Random(seed)

    def finset(self, prefix: str) -> FinSet:
        n = self.rng.randint(1, self.max_obj)
        return FinSet(f"{prefix}{i}" for i in range(n))

    def fun(self, a: FinSet, b: FinSet) -> FinFun:
        return FinFun(a, b, tuple(self.rng.choice(b.elements) for _ in a))

    def poly(self, x: FinSet, y: FinSet, prefix: str = "o") -> Polynomial:
        k = self.rng.randint(0, self.max_ops)
        ops, slots, sigma, theta, tau = [], [], [], [], []
        for i in range(k):
            name = f"{prefix}{i}"
            ops.append(name)
            tau.append(self.rng.choice(y.elements))
            for j in range(self.rng.randint(0, self.max_arity)):
                slots.append(f"{name}.{j}")
                sigma.append(self.rng.choice(x.elements))
                theta.append(name)
        o, s = FinSet(ops), FinSet(slots)
        return Polynomial(x, y, s, o, FinFun(s, x, tuple(sigma)),
                          FinFun(s, o, tuple(theta)), FinFun(o, y, tuple(tau)))

    def pushforward(self, top: Polynomial, u: FinFun, v: FinFun) -> PolySquare:
        bottom = Polynomial(
            u.cod, v.cod, top.slots, top.ops,
            FinFun(top.slots, u.cod, tuple(u(top.sigma(e)) for e in top.slots)),
            top.theta,
            FinFun(top.ops, v.cod, tuple(v(top.tau(b)) for b in top.ops)),
        )
        return PolySquare(top, bottom, u, v, identity(top.ops), identity(top.slots))

    def square(self) -> PolySquare:
        x, y = self.finset("x"), self.finset("y")
        top = self.poly(x, y)
        u = self.fun(x, self.finset("v"))
        v = self.fun(y, self.finset("w"))
        return self.pushforward(top, u, v)

    def grid2x2(self):
        a, b, cset = self.finset("a"), self.finset("b"), self.finset("c")
        t1, t2 = self.poly(a, b, "o"), self.poly(b, cset, "n")
        a1, b1, c1 = self.finset("p"), self.finset("q"), self.finset("r")
        u, w, v = self.fun(a, a1), self.fun(b, b1), self.fun(cset, c1)
        s11, s12 = self.pushforward(t1, u, w), self.pushforward(t2, w, v)
        a2, b2, c2 = self.finset("s"), self.finset("t"), self.finset("z")
        u2, w2, v2 = self.fun(a1, a2), self.fun(b1, b2), self.fun(c1, c2)
        return (s11, s12, self.pushforward(s11.bottom, u2, w2),
                self.pushforward(s12.bottom, w2, v2))

    def arrow_triple(self):
        a, b, cset, d = (self.finset(p) for p in "abcd")
        return self.poly(cset, d, "h"), self.poly(b, cset, "g"), self.poly(a, b, "o")


def sampler_for(instance, seed: int = 0, **kw):
    if instance.name == "poly":
        return PolySampler(instance, seed=seed, **kw)
    return SpanSampler(instance, seed=seed, **kw)


# ---------------------------------------------------------------------------
# Suites: double-category axioms


def check_double_axioms(sampler, trials: int = 200, skip_coherence: bool = False) -> LawReport:
    """Interchange, identity squares and associativity/unit laws modulo
    coherence, on random configurations.

    skip_coherence is a fault-injection knob: it compares the unit laws
    strictly, without the coherence conjugation, which must fail."""
    c = sampler.c
    rb = ReportBuilder(f"double-axioms-{c.name}", sampler._seed)
    eq = (lambda a, b: c.sq_eq(a, b)) if skip_coherence else (
        lambda a, b: squares_equal_mod_coherence(c, a, b)
    )
    for t in range(trials):
        kind = t % 4
        if kind == 0:
            s11, s12, s21, s22 = sampler.grid2x2()
            lhs = c.sq_vcomp(c.sq_hcomp(s22, s21), c.sq_hcomp(s12, s11))
            rhs = c.sq_hcomp(c.sq_vcomp(s22, s12), c.sq_vcomp(s21, s11))
            rb.check("interchange", c.sq_eq(lhs, rhs),
                     f"grid:\n{s11}\n{s12}\n{s21}\n{s22}")
        elif kind == 1:
            s = sampler.square()
            ok = c.sq_eq(c.sq_vcomp(s, c.sq_vid(c.sq_top(s))), s) and c.sq_eq(
                c.sq_vcomp(c.sq_vid(c.sq_bottom(s)), s), s
            )
            rb.check("vertical-identities", ok, f"square: {s}")
        elif kind == 2:
            s = sampler.square()
            u, v = c.sq_left(s), c.sq_right(s)
            lhs = c.sq_hcomp(s, c.sq_hid(u))
            rhs = c.sq_hcomp(c.sq_hid(v), s)
            rb.check("right-unit", eq(lhs, s), f"square: {s}")
            rb.check("left-unit", eq(rhs, s), f"square: {s}")
        else:
            h, g, f = sampler.arrow_triple()
            a = c.associator(h, g, f)
            ok = c.sq_eq(c.sq_vcomp(a.inv, a.fwd), c.sq_vid(c.sq_top(a.fwd))) and c.sq_eq(
                c.sq_vcomp(a.fwd, a.inv), c.sq_vid(c.sq_top(a.inv))
            )
            rb.check("associator-invertible", ok, f"arrows: {h}, {g}, {f}")
            lu, ru = c.lunitor(f), c.runitor(f)
            ok2 = c.sq_eq(c.sq_vcomp(lu.inv, lu.fwd), c.sq_vid(c.sq_top(lu.fwd))) and c.sq_eq(
                c.sq_vcomp(ru.inv, ru.fwd), c.sq_vid(c.sq_top(ru.fwd))
            )
            rb.check("unitors-invertible", ok2, f"arrow: {f}")
    return rb.done()


# ---------------------------------------------------------------------------
# Suites: framed structure


def _all_finsets(max_size: int, prefix: str):
    for n in range(1, max_size + 1):
        yield FinSet(f"{prefix}{i}" for i in range(n))


def check_framed(instance, max_size: int, seed: int = 0) -> LawReport:
    """Exhaustive companion/conjoint check: the five binding equalities
    and both triangle identities, for every vertical arrow between sets
    within the size bound."""
    c = instance
    rb = ReportBuilder(f"framed-{c.name}", seed)
    for a in _all_finsets(max_size, "a"):
        for b in _all_finsets(max_size, "b"):
            for u in all_functions(a, b):
                fr = c.framed(u)
                hid_u = c.sq_hid(u)
                tag = f"u = {u}"
                rb.check("alpha-delta", c.sq_eq(c.sq_vcomp(fr.alpha, fr.delta), hid_u), tag)
                rb.check("beta-gamma", c.sq_eq(c.sq_vcomp(fr.beta, fr.gamma), hid_u), tag)
                rb.check(
                    "companion-roundtrip",
                    squares_equal_mod_coherence(
                        c, c.sq_hcomp(fr.alpha, fr.delta), c.sq_vid(fr.companion)
                    ),
                    tag,
                )
                rb.check(
                    "conjoint-roundtrip",
                    squares_equal_mod_coherence(
                        c, c.sq_hcomp(fr.gamma, fr.beta), c.sq_vid(fr.conjoint)
                    ),
                    tag,
                )
                eta = dc.eta_square(c, fr)
                eps = dc.epsilon_square(c, fr)
                rb.check(
                    "unit-counit-boundary",
                    c.sq_top(eta) == c.hid(a) and c.sq_bottom(eps) == c.hid(b),
                    tag,
                )
                vj = c.sq_vid(fr.conjoint)
                t1 = paste(c, CellPath([[vj, eta], [eps, vj]]))
                rb.check("triangle-conjoint",
                         squares_equal_mod_coherence(c, t1, vj), tag)
                vc = c.sq_vid(fr.companion)
                t2 = paste(c, CellPath([[eta, vc], [vc, eps]]))
                rb.check("triangle-companion",
                         squares_equal_mod_coherence(c, t2, vc), tag)
    return rb.done()


# ---------------------------------------------------------------------------
# Suites: monads and monad maps


def check_monad_laws(c, arrow, mult, unit, overflow=None, suite: Optional[str] = None,
                     seed: int = 0) -> LawReport:
    """The three monad laws.  A missing multiplication (a truncated free
    construction) fails with the overflowing composable pair as the
    counterexample."""
    rb = ReportBuilder(suite or f"monad-laws-{c.name}", seed)
    if mult is None:
        lhs, rhs = overflow if overflow else ("?", "?")
        rb.check(
            "totality",
            False,
            "multiplication is partial: the composite of\n"
            f"  {lhs!r} and {rhs!r}\n"
            "falls outside the carrier, so associativity has no value at\n"
            f"  ({lhs!r}, {rhs!r}, -) and the unit laws cannot close.",
        )
        return rb.done()
    for s, what in ((mult, "mult"), (unit, "unit")):
        rb.check(f"{what}-well-formed", square_well_formed(c, s), f"{what}: {s}")
    if rb.failures:
        return rb.done()
    bad = mnd.monad_laws_ok(c, HorMonad(arrow, mult, unit))
    rb.check("laws", bad is None,
             f"failing law: {bad}\narrow: {arrow}\nmult: {mult}\nunit: {unit}")
    return rb.done()


def check_hor_map(c, dom: HorMonad, cod: HorMonad, h, seed: int = 0) -> LawReport:
    rb = ReportBuilder(f"hor-monad-map-{c.name}", seed)
    bad = mnd.hor_monad_map_ok(c, dom, cod, h)
    rb.check("laws", bad is None, f"failing law: {bad}\nmap: {h}")
    return rb.done()


def check_vert_map(c, dom: HorMonad, cod: HorMonad, m, seed: int = 0) -> LawReport:
    rb = ReportBuilder(f"vert-monad-map-{c.name}", seed)
    rb.check("well-formed", square_well_formed(c, m.square), f"square: {m.square}")
    if rb.failures:
        return rb.done()
    bad = mnd.vert_monad_map_ok(c, dom, cod, m)
    rb.check("laws", bad is None, f"failing law: {bad}\nmap: {m}")
    return rb.done()


def check_endo_square(c, s, seed: int = 0) -> LawReport:
    rb = ReportBuilder(f"endo-square-{c.name}", seed)
    end = mnd.EndInstance(c)
    rb.guard("compatibility", lambda: end.square_condition(s), f"square: {s}")
    return rb.done()


# ---------------------------------------------------------------------------
# Enumerators of small monads


def enumerate_span_monads(nodes: FinSet, max_mor: int) -> Iterable[MonadObj]:
    """All monads in the span instance on a fixed node set with at most
    max_mor morphisms: identities pinned, source/target and composition
    tables enumerated and filtered by the unit and associativity laws."""
    ids = {n: f"id({n})" for n in nodes}
    base = list(ids.values())
    for extra in range(0, max_mor - len(base) + 1):
        extras = [f"m{i}" for i in range(extra)]
        names = base + extras
        for st in itertools.product(
            itertools.product(nodes.elements, repeat=2), repeat=extra
        ):
            src = {ids[n]: n for n in nodes}
            tgt = {ids[n]: n for n in nodes}
            for m, (s, t) in zip(extras, st):
                src[m], tgt[m] = s, t
            pairs = [
                (f, g) for f in names for g in names if tgt[f] == src[g]
            ]
            free = [(f, g) for f, g in pairs if f not in base and g not in base]
            cands = [
                [h for h in names if src[h] == src[f] and tgt[h] == tgt[g]]
                for f, g in free
            ]
            if any(not cs for cs in cands):
                continue
            for combo in itertools.product(*cands):
                comp = {}
                for f, g in pairs:
                    if f in base:
                        comp[(f, g)] = g
                    elif g in base:
                        comp[(f, g)] = f
                for (f, g), h in zip(free, combo):
                    comp[(f, g)] = h
                if not _assoc_ok(names, src, tgt, comp):
                    continue
                yield _span_monad(nodes, names, src, tgt, comp)


def _assoc_ok(names, src, tgt, comp) -> bool:
    for f in names:
        for g in names:
            if tgt[f] != src[g]:
                continue
            fg = comp[(f, g)]
            for h in names:
                if tgt[g] != src[h]:
                    continue
                if comp[(fg, h)] != comp[(f, comp[(g, h)])]:
                    return False
    return True


def _span_monad(nodes: FinSet, names, src, tgt, comp) -> MonadObj:
    apex = FinSet(names)
    arrow = Span(
        nodes, nodes, apex,
        FinFun(apex, nodes, tuple(src[m] for m in names)),
        FinFun(apex, nodes, tuple(tgt[m] for m in names)),
    )
    two = compose_spans(arrow, arrow)
    p1, p2 = _comp_projections(two)
    mult = SpanSquare(
        two, arrow, identity(nodes), identity(nodes),
        FinFun(two.apex, apex, tuple(comp[(p1(x), p2(x))] for x in two.apex)),
    )
    unit = SpanSquare(
        id_span(nodes), arrow, identity(nodes), identity(nodes),
        FinFun(nodes, apex, tuple(f"id({n})" for n in nodes)),
    )
    return MonadObj(nodes, arrow, mult, unit)


def enumerate_poly_monads(instance, base: FinSet, max_ops: int, max_arity: int):
    """All polynomial monads on a base set within the op/arity bounds,
    by brute-force enumeration of (polynomial, mult, unit) triples
    filtered through the monad laws."""
    for k in range(0, max_ops + 1):
        shapes = itertools.product(
            itertools.product(
                range(max_arity + 1), base.elements
            ),
            repeat=k,
        )
        for shape in shapes:
            ops, slots, sigma, theta, tau = [], [], [], [], []
            arity_types = []
            for i, (ar, out) in enumerate(shape):
                name = f"o{i}"
                ops.append(name)
                tau.append(out)
                arity_types.append(ar)
            # enumerate slot typings
            slot_spaces = [
                list(itertools.product(base.elements, repeat=ar))
                for ar in arity_types
            ]
            for typing in itertools.product(*slot_spaces):
                slots, sigma, theta = [], [], []
                for name, tys in zip(ops, typing):
                    for j, ty in enumerate(tys):
                        slots.append(f"{name}.{j}")
                        sigma.append(ty)
                        theta.append(name)
                o, s = FinSet(ops), FinSet(slots)
                m = Polynomial(base, base, s, o,
                               FinFun(s, base, tuple(sigma)),
                               FinFun(s, o, tuple(theta)),
                               FinFun(o, base, tuple(tau)))
                yield from _poly_monads_on(instance, m)


def _poly_monads_on(c, m: Polynomial):
    i = identity(m.src)
    units = list(c.enumerate_squares(id_poly(m.src), m, i, i))
    if not units:
        return
    two = compose_polys(m, m)
    mults = list(c.enumerate_squares(two, m, i, i))
    for unit in units:
        for mult in mults:
            if mnd.monad_laws_ok(c, HorMonad(m, mult, unit)) is None:
                yield MonadObj(m.src, m, mult, unit)


def enumerate_vert_maps(c, dom: Endomorphism, target) -> Iterable[VertEndoMap]:
    """All vertical endomorphism maps from dom into the target."""
    tgt = as_endo(target)
    for u in all_functions(dom.obj, tgt.obj):
        for sq in c.enumerate_squares(dom.arrow, tgt.arrow, u, u):
            yield VertEndoMap(dom, tgt, u, sq)


# ---------------------------------------------------------------------------
# Universal property of the free monad


def _span_monad_map_count(free, target: MonadObj, vm: VertEndoMap,
                          limit: int = 2):
    """Count (up to limit) the vertical monad maps out of a free span
    monad that factor vm through the unit, by constraint propagation
    over the path table: identity paths are pinned by the unit law,
    generator paths by the factorization, composites by the
    multiplication law.  The search is exhaustive: every total table is
    either visited or excluded by a violated constraint."""
    star, mult = free.star, free.mult
    t_arrow = target.arrow
    u = vm.u
    paths = list(star.apex)
    t_by_bounds: dict[tuple, list] = {}
    for mname in t_arrow.apex:
        key = (t_arrow.left(mname), t_arrow.right(mname))
        t_by_bounds.setdefault(key, []).append(mname)
    pinned = {}
    for n in star.src:  # unit law
        pinned[f"id({n})"] = target.unit.mid(u(n))
    for e in vm.dom.arrow.apex:  # factorization through the unit
        pinned[free.iota.mid(e)] = vm.square.mid(e)
    two = compose_spans(star, star)
    p1, p2 = _comp_projections(two)
    comp_constraints = [(p1(x), p2(x), mult.mid(x)) for x in two.apex]
    t_two = compose_spans(t_arrow, t_arrow)
    tp1, tp2 = _comp_projections(t_two)
    t_comp = {(tp1(x), tp2(x)): target.mult.mid(x) for x in t_two.apex}

    order = sorted(paths, key=lambda p: (p not in pinned, len(p)))
    solutions = []

    def consistent(assign):
        for f, g, fg in comp_constraints:
            if f in assign and g in assign and fg in assign:
                if t_comp[(assign[f], assign[g])] != assign[fg]:
                    return False
        return True

    def extend(i, assign):
        if len(solutions) >= limit:
            return
        if i == len(order):
            solutions.append(dict(assign))
            return
        p = order[i]
        key = (u(star.left(p)), u(star.right(p)))
        cands = [pinned[p]] if p in pinned else t_by_bounds.get(key, [])
        for val in cands:
            assign[p] = val
            if consistent(assign):
                extend(i + 1, assign)
            del assign[p]

    extend(0, {})
    return solutions


def check_universal_property(c, bundle, targets, seed: int = 0,
                             suite: Optional[str] = None) -> LawReport:
    """Existence and uniqueness of the monad-map factorization of every
    vertical endomorphism map into every given target monad."""
    rb = ReportBuilder(suite or f"universal-{c.name}", seed)
    star_m = bundle.monad.hor()
    for ti, target in enumerate(targets):
        for vi, vm in enumerate(enumerate_vert_maps(c, bundle.endo, target)):
            tag = f"target #{ti}, map #{vi}: u={vm.u}, square={vm.square}"
            try:
                sharp = bundle.vertical_sharp(target, vm)
            except Exception as exc:
                rb.check("existence", False, f"{tag}\nraised: {exc!r}")
                continue
            bad = mnd.vert_monad_map_ok(c, star_m, target.hor(), sharp)
            rb.check("sharp-is-monad-map", bad is None, f"{tag}\nfailing law: {bad}")
            factored = c.sq_eq(
                c.sq_vcomp(sharp.square, bundle.unit_map.square), vm.square
            )
            rb.check("factorization", factored, tag)
            if c.name == "span":
                sols = _span_monad_map_count(bundle.free, target, vm)
                unique = len(sols) == 1 and all(
                    sols[0][p] == sharp.square.mid(p) for p in sols[0]
                )
                rb.check("uniqueness", unique,
                         f"{tag}\nsolutions found: {len(sols)}")
            else:
                count = 0
                for cand in c.enumerate_squares(
                    bundle.monad.arrow, target.arrow, vm.u, vm.u
                ):
                    cvm = VertEndoMap(as_endo(bundle.monad), vm.cod, vm.u, cand)
                    if not c.sq_eq(
                        c.sq_vcomp(cand, bundle.unit_map.square), vm.square
                    ):
                        continue
                    if mnd.vert_monad_map_ok(c, star_m, target.hor(), cvm) is None:
                        count += 1
                        if count > 1:
                            break
                rb.check("uniqueness", count == 1,
                         f"{tag}\nsolutions found: {count}")
    return rb.done()


# ---------------------------------------------------------------------------
# The compatibility pipeline


def check_theorem_pipeline(c, bundle_p, bundle_q, alpha, seed: int = 0,
                           suite: Optional[str] = None) -> LawReport:
    """Evaluate every displayed equation of the compatibility argument
    on a concrete endomorphism square into monads, and confirm that the
    equalizer inclusion is an isomorphism."""
    rb = ReportBuilder(suite or f"pipeline-{c.name}", seed)
    end = mnd.EndInstance(c)
    rb.guard("input-square", lambda: end.square_condition(alpha), f"alpha: {alpha.alpha}")
    try:
        sharped = bundle_p.general_sharp(bundle_q, alpha)
        witness = mnd.equalizer_witness(c, sharped, bundle_q)
    except Exception as exc:
        rb.check("assembly", False, f"raised: {exc!r}")
        return rb.done()
    rb.guard("sharp-square", lambda: end.square_condition(sharped),
             f"alpha-sharp: {sharped.alpha}")
    rb.check("diag-lambda", witness.diag1_ok, "eta-composite fails to equalize")
    rb.check("diag-rho", witness.diag2_ok, "nu-composite fails to equalize")
    rb.check("theta-iso", witness.theta_inv is not None,
             f"no inverse found for theta: {witness.theta}")
    eqs = mnd.pipeline_equations(c, bundle_p, bundle_q, alpha, sharped, witness)
    for name, (lhs, rhs) in eqs.items():
        rb.guard(
            name,
            lambda l=lhs, r=rhs: squares_equal_mod_coherence(c, l, r),
            f"lhs: {lhs}\nrhs: {rhs}",
        )
    return rb.done()
