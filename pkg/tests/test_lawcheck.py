import dataclasses

import pytest

from dblcat import lawcheck as lc
from dblcat import mnd
from dblcat.finset import FinFun, FinSet
from dblcat.poly import PolyInstance, parse_poly
from dblcat.span import Graph, SpanInstance, SpanSquare, free_category, span_from_relation

S = SpanInstance()
P = PolyInstance()


def test_report_line_format():
    r = lc.LawReport("demo", 10, [], 7, 0.1)
    assert r.line() == "SUITE demo PASS 10 0 seed=7"
    r = lc.LawReport("demo", 10, [lc.Failure("x", "because")], 7, 0.1)
    assert r.line() == "SUITE demo FAIL 10 1 seed=7"
    assert "because" in r.render()


def test_double_axioms_pass_both_instances():
    for inst, trials in ((S, 60), (P, 40)):
        rep = lc.check_double_axioms(lc.sampler_for(inst, seed=0), trials=trials)
        assert rep.passed, rep.render()
        assert rep.checks >= trials


def test_double_axioms_deterministic():
    a = lc.check_double_axioms(lc.sampler_for(S, seed=3), trials=20)
    b = lc.check_double_axioms(lc.sampler_for(S, seed=3), trials=20)
    assert a.line() == b.line()


def test_framed_suites_pass():
    assert lc.check_framed(S, 2).passed
    assert lc.check_framed(P, 2).passed


def z3_monad():
    """The three-element cyclic monoid, as a span monad on a point."""
    for m in lc.enumerate_span_monads(FinSet(["t0"]), 3):
        tbl = {x: m.mult.mid(x) for x in m.mult.top.apex}
        if tbl.get("(m0,m0)") == "m1" and tbl.get("(m0,m1)") == "id(t0)":
            return m
    raise AssertionError("cyclic monoid not found")


def test_mutation_corrupt_mult_detected():
    m = z3_monad()
    assert lc.check_monad_laws(S, m.arrow, m.mult, m.unit).passed
    tbl = {x: m.mult.mid(x) for x in m.mult.top.apex}
    tbl["(m0,m0)"] = "id(t0)"
    bad = SpanSquare(
        m.mult.top, m.mult.bottom, m.mult.u, m.mult.v,
        FinFun(m.mult.top.apex, m.arrow.apex, tbl),
    )
    rep = lc.check_monad_laws(S, m.arrow, bad, m.unit)
    assert not rep.passed
    assert rep.failures[0].check == "laws"
    assert "associativity" in rep.failures[0].detail


def test_truncated_free_category_rejected_with_counterexample():
    g = Graph.build(FinSet(["n"]), [("e", "n", "n")])
    cat, _, exact = free_category(g, 3)
    assert not exact
    rep = lc.check_monad_laws(S, cat.morphisms, cat.mult, cat.unit, overflow=cat.overflow)
    assert not rep.passed
    assert "associativity" in rep.failures[0].detail
    assert cat.overflow[0] in rep.failures[0].detail


def test_mutation_broken_pullback_detected():
    src = parse_poly("poly\nbase: y1 y2\nop c : -> y1\nop g y1 : -> y2\n")
    fm = P.free_monad(src)
    assert fm.exact
    mult = fm.mult
    tbl = {x: mult.phibar(x) for x in mult.phibar.dom}
    ks = list(tbl)
    tbl[ks[0]] = tbl[ks[1]]  # no longer fiberwise bijective
    object.__setattr__(mult, "phibar", FinFun(mult.phibar.dom, mult.phibar.cod, tbl))
    rep = lc.check_monad_laws(P, fm.star, mult, fm.unit)
    assert not rep.passed
    assert rep.failures[0].check == "mult-well-formed"


def test_mutation_dropped_coherence_detected():
    rep = lc.check_double_axioms(
        lc.sampler_for(S, seed=1), trials=40, skip_coherence=True
    )
    assert not rep.passed


def test_mutation_swapped_companion_conjoint_detected():
    # treating a companion as a conjoint breaks the binding equalities
    a = FinSet(["x", "y"])
    b = FinSet(["p"])
    u = FinFun(a, b, ("p", "p"))
    fr = S.framed(u)
    swapped = dataclasses.replace(
        fr, companion=fr.conjoint, conjoint=fr.companion,
        alpha=fr.gamma, gamma=fr.alpha, beta=fr.delta, delta=fr.beta,
    )
    rb = lc.ReportBuilder("framed-swapped", 0)
    rb.guard(
        "alpha-delta",
        lambda: S.sq_eq(S.sq_vcomp(swapped.alpha, swapped.delta), S.sq_hid(u)),
        f"u = {u}",
    )
    rep = rb.done()
    assert not rep.passed


def brute_force_monoid_count(n):
    """Independent oracle: associative tables on {0..n-1} with 0 as a
    pinned two-sided unit."""
    import itertools

    elts = list(range(n))
    free = [(a, b) for a in elts[1:] for b in elts[1:]]
    count = 0
    for vals in itertools.product(elts, repeat=len(free)):
        t = {}
        for x in elts:
            t[(0, x)] = x
            t[(x, 0)] = x
        t.update(dict(zip(free, vals)))
        if all(
            t[(t[(a, b)], c)] == t[(a, t[(b, c)])]
            for a in elts for b in elts for c in elts
        ):
            count += 1
    return count


def test_enumerate_span_monads_counts():
    # one-object span monads are monoids; sizes tallied against an
    # independent brute force over multiplication tables
    one = FinSet(["t0"])
    by_size = {}
    for m in lc.enumerate_span_monads(one, 3):
        by_size.setdefault(len(m.arrow.apex), 0)
        by_size[len(m.arrow.apex)] += 1
    assert by_size == {n: brute_force_monoid_count(n) for n in (1, 2, 3)}


def test_enumerated_monads_are_lawful():
    for m in lc.enumerate_span_monads(FinSet(["t0", "t1"]), 3):
        assert mnd.monad_laws_ok(S, m.hor()) is None
    for m in lc.enumerate_poly_monads(P, FinSet(["y"]), 2, 1):
        assert mnd.monad_laws_ok(P, m.hor()) is None


def test_universal_property_suite_small():
    X = FinSet(["p", "q"])
    edge = span_from_relation(X, X, [("e", "p", "q")])
    bundle = mnd.free_monad_adjunction(S, mnd.Endomorphism(X, edge))
    targets = list(lc.enumerate_span_monads(FinSet(["t0"]), 3))
    rep = lc.check_universal_property(S, bundle, targets)
    assert rep.passed, rep.render()


def test_universal_property_suite_catches_wrong_sharp():
    # a fabricated "sharp" that is not a monad map must be rejected
    X = FinSet(["p", "q"])
    edge = span_from_relation(X, X, [("e", "p", "q")])
    bundle = mnd.free_monad_adjunction(S, mnd.Endomorphism(X, edge))
    target = z3_monad()
    vm = next(lc.enumerate_vert_maps(S, bundle.endo, target))
    sharp = bundle.vertical_sharp(target, vm)
    # corrupt the sharp square on a composite path
    tbl = {x: sharp.square.mid(x) for x in sharp.square.top.apex}
    long_path = max(tbl, key=len)
    tbl[long_path] = "m0" if tbl[long_path] != "m0" else "m1"
    bad = SpanSquare(
        sharp.square.top, sharp.square.bottom, sharp.square.u, sharp.square.v,
        FinFun(sharp.square.top.apex, target.arrow.apex, tbl),
    )
    bad_vm = mnd.VertEndoMap(sharp.dom, sharp.cod, sharp.u, bad)
    assert (
        mnd.vert_monad_map_ok(S, bundle.monad.hor(), target.hor(), bad_vm) is not None
    )


def test_pipeline_suite_passes_both_instances():
    X = FinSet(["p", "q"])
    edge = span_from_relation(X, X, [("e", "p", "q")])
    e = mnd.Endomorphism(X, edge)
    bundle = mnd.free_monad_adjunction(S, e)
    alpha = mnd.identity_scenario(S, e, bundle.monad, bundle.unit_map)
    rep = lc.check_theorem_pipeline(S, bundle, bundle, alpha)
    assert rep.passed, rep.render()

    src = parse_poly("poly\nbase: y\nop c : -> y\n")
    ep = mnd.Endomorphism(src.src, src)
    bp = mnd.free_monad_adjunction(P, ep)
    alphap = mnd.identity_scenario(P, ep, bp.monad, bp.unit_map)
    repp = lc.check_theorem_pipeline(P, bp, bp, alphap)
    assert repp.passed, repp.render()
