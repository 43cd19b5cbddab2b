import pytest

from dblcat import doublecat as dc
from dblcat.doublecat import (
    BoundaryError,
    CellPath,
    canonical_iso,
    paste,
    retarget,
    squares_equal_mod_coherence,
    trivial_vertical_instance,
)
from dblcat.finset import FinFun, FinSet
from dblcat.lawcheck import SpanSampler
from dblcat.span import SpanInstance, Span, span_from_relation


@pytest.fixture(scope="module")
def S():
    return SpanInstance()


def test_interchange_on_sampled_grids(S):
    sampler = SpanSampler(S, seed=7)
    for _ in range(30):
        s11, s12, s21, s22 = sampler.grid2x2()
        lhs = S.sq_vcomp(S.sq_hcomp(s22, s21), S.sq_hcomp(s12, s11))
        rhs = S.sq_hcomp(S.sq_vcomp(s22, s12), S.sq_vcomp(s21, s11))
        assert S.sq_eq(lhs, rhs)


def test_coherence_isos_invertible(S):
    sampler = SpanSampler(S, seed=3)
    for _ in range(20):
        h, g, f = sampler.arrow_triple()
        for iso in (S.associator(h, g, f), S.lunitor(f), S.runitor(f)):
            fwd, inv = iso.fwd, iso.inv
            assert S.sq_eq(S.sq_vcomp(inv, fwd), S.sq_vid(S.sq_top(fwd)))
            assert S.sq_eq(S.sq_vcomp(fwd, inv), S.sq_vid(S.sq_bottom(fwd)))


def test_canonical_iso_reassociates(S):
    sampler = SpanSampler(S, seed=5)
    h, g, f = sampler.arrow_triple()
    left = S.hcomp(S.hcomp(h, g), f)
    right = S.hcomp(h, S.hcomp(g, f))
    iso = canonical_iso(S, left, right)
    assert S.sq_top(iso.fwd) == left
    assert S.sq_bottom(iso.fwd) == right
    assert S.sq_eq(S.sq_vcomp(iso.inv, iso.fwd), S.sq_vid(left))


def test_canonical_iso_rejects_different_leaves(S):
    a = FinSet(["a"])
    f = span_from_relation(a, a, [("e", "a", "a")])
    with pytest.raises(BoundaryError):
        canonical_iso(S, f, S.hid(a))


def test_paste_inserts_coherence(S):
    # a two-row pasting whose middle boundaries agree only up to
    # reassociation still pastes, and equals the plain vertical
    # composite modulo coherence
    sampler = SpanSampler(S, seed=11)
    for _ in range(10):
        h, g, f = sampler.arrow_triple()
        va = S.sq_vid(S.hcomp(S.hcomp(h, g), f))
        vb = S.sq_vid(S.hcomp(h, S.hcomp(g, f)))
        out = paste(S, CellPath([[va], [vb]]))
        assert squares_equal_mod_coherence(S, out, va)


def test_retarget_preserves_identity(S):
    sampler = SpanSampler(S, seed=13)
    h, g, f = sampler.arrow_triple()
    left = S.hcomp(S.hcomp(h, g), f)
    right = S.hcomp(h, S.hcomp(g, f))
    moved = retarget(S, S.sq_vid(left), right, right)
    assert squares_equal_mod_coherence(S, moved, S.sq_vid(right))


def test_trivial_vertical_rejects_nonidentities(S):
    T = trivial_vertical_instance(S)
    a = FinSet(["x", "y"])
    b = FinSet(["p"])
    u = FinFun(a, b, {"x": "p", "y": "p"})
    with pytest.raises(BoundaryError):
        T.sq_hid(u)
    # identities are fine, and globular composition agrees with the base
    f = span_from_relation(a, a, [("e", "x", "y")])
    assert T.sq_eq(T.sq_vid(f), S.sq_vid(f))


def test_squares_equal_mod_coherence_negative(S):
    a = FinSet(["x"])
    f = span_from_relation(a, a, [("e1", "x", "x"), ("e2", "x", "x")])
    swap = FinFun(f.apex, f.apex, {"e1": "e2", "e2": "e1"})
    from dblcat.span import SpanSquare

    tw = SpanSquare(f, f, FinFun(a, a, ("x",)), FinFun(a, a, ("x",)), swap)
    assert not squares_equal_mod_coherence(S, tw, S.sq_vid(f))
