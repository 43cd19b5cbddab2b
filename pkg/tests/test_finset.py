import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dblcat.finset import (
    FinFun,
    FinSet,
    SliceObject,
    all_functions,
    compose_fun,
    coproduct,
    copair,
    dependent_product,
    equalizer,
    fiber,
    find_commuting_bijection,
    identity,
    pullback,
    pullback_mediate,
)


def small_sets(max_size=4, prefix="x"):
    return [FinSet(f"{prefix}{i}" for i in range(n)) for n in range(0, max_size + 1)]


def test_identity_and_composition():
    a = FinSet(["x", "y"])
    b = FinSet(["p", "q", "r"])
    f = FinFun(a, b, {"x": "p", "y": "r"})
    assert compose_fun(f, identity(a)) == f
    assert compose_fun(identity(b), f) == f


def test_all_functions_count():
    for a in small_sets(3, "a"):
        for b in small_sets(3, "b"):
            fs = list(all_functions(a, b))
            if len(a) == 0:
                assert len(fs) == 1
            else:
                assert len(fs) == len(b) ** len(a)


def test_pullback_universal_property():
    # the pullback apex is terminal among commuting cones, checked
    # exhaustively on small sets
    a = FinSet(["a0", "a1"])
    b = FinSet(["b0", "b1", "b2"])
    c = FinSet(["c0", "c1"])
    for f in all_functions(a, c):
        for g in all_functions(b, c):
            apex, p1, p2 = pullback(f, g)
            assert compose_fun(f, p1) == compose_fun(g, p2)
            # every commuting cone factors uniquely
            for z in small_sets(2, "z"):
                for q1 in all_functions(z, a):
                    for q2 in all_functions(z, b):
                        if compose_fun(f, q1) != compose_fun(g, q2):
                            continue
                        m = pullback_mediate(apex, q1, q2)
                        assert compose_fun(p1, m) == q1
                        assert compose_fun(p2, m) == q2
                        others = [
                            h
                            for h in all_functions(z, apex)
                            if compose_fun(p1, h) == q1 and compose_fun(p2, h) == q2
                        ]
                        assert others == [m]


def test_equalizer_is_largest_agreeing_subset():
    a = FinSet(["0", "1", "2", "3"])
    b = FinSet(["p", "q"])
    f = FinFun(a, b, {"0": "p", "1": "q", "2": "p", "3": "q"})
    g = FinFun(a, b, {"0": "p", "1": "p", "2": "p", "3": "q"})
    e, inc = equalizer(f, g)
    assert set(e.elements) == {"0", "2", "3"}
    for x in e:
        assert f(inc(x)) == g(inc(x))


def test_coproduct_copair():
    a = FinSet(["x"])
    b = FinSet(["y", "z"])
    s, i1, i2 = coproduct(a, b)
    assert len(s) == 3
    c = FinSet(["0", "1"])
    f = FinFun(a, c, {"x": "0"})
    g = FinFun(b, c, {"y": "1", "z": "0"})
    h = copair(s, i1, i2, f, g)
    assert compose_fun(h, i1) == f
    assert compose_fun(h, i2) == g


def test_fiber():
    a = FinSet(["0", "1", "2"])
    b = FinSet(["p", "q"])
    f = FinFun(a, b, {"0": "p", "1": "p", "2": "q"})
    assert set(fiber(f, "p").elements) == {"0", "1"}
    assert set(fiber(f, "q").elements) == {"2"}


def test_dependent_product_counts():
    # |Pi_f(s)| over each y is the product of the fiber sizes of s over
    # the fiber of f at y
    a = FinSet(["0", "1", "2"])
    b = FinSet(["p", "q"])
    f = FinFun(a, b, {"0": "p", "1": "p", "2": "q"})
    total = FinSet(["s0", "s1", "s2", "s3"])
    s = SliceObject(total, a, FinFun(total, a, {"s0": "0", "s1": "0", "s2": "1", "s3": "2"}))
    pi = dependent_product(f, s)
    sizes = {y: len(pi.fiber(y)) for y in b}
    assert sizes["p"] == 2 * 1  # choices over 0 times choices over 1
    assert sizes["q"] == 1


@given(st.integers(1, 4), st.integers(1, 4), st.randoms())
@settings(max_examples=40, deadline=None)
def test_find_commuting_bijection_identity(n, m, rnd):
    a = FinSet(f"a{i}" for i in range(n))
    b = FinSet(f"b{i}" for i in range(m))
    f = FinFun(a, b, tuple(rnd.choice(b.elements) for _ in a))
    # a function commutes with itself along some bijection (the identity)
    found = find_commuting_bijection(a, a, [(f, f)])
    assert found is not None
    assert compose_fun(f, found) == f


def test_finfun_inverse():
    a = FinSet(["x", "y"])
    b = FinSet(["p", "q"])
    f = FinFun(a, b, {"x": "q", "y": "p"})
    assert f.is_bijection()
    g = f.inverse()
    assert compose_fun(g, f) == identity(a)
    assert compose_fun(f, g) == identity(b)
