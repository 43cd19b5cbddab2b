import random

import pytest

from dblcat.finset import FinFun, FinSet, SliceObject, fiber
from dblcat.lawcheck import PolySampler
from dblcat.poly import (
    ParseError,
    PolyInstance,
    Polynomial,
    compose_eval_bijection,
    compose_polys,
    evaluate_poly,
    evaluate_poly_slicewise,
    free_poly_monad,
    id_poly,
    parse_poly,
)

P = PolyInstance()


def random_slice(rng, base, max_fib=3, prefix="v"):
    names, proj = [], []
    for y in base:
        for i in range(rng.randint(0, max_fib)):
            names.append(f"{prefix}{y}.{i}")
            proj.append(y)
    t = FinSet(names)
    return SliceObject(t, base, FinFun(t, base, tuple(proj)))


def test_evaluation_dual_route():
    # direct sum-of-products evaluation agrees with the pullback /
    # dependent product / postcomposition factorization
    rng = random.Random(2)
    sampler = PolySampler(P, max_ops=3, max_arity=2, seed=2)
    for _ in range(30):
        x, y = sampler.finset("x"), sampler.finset("y")
        p = sampler.poly(x, y)
        s = random_slice(rng, x)
        direct = evaluate_poly(p, s)
        slicewise = evaluate_poly_slicewise(p, s)
        for b in y:
            assert len(fiber(direct.proj, b)) == len(fiber(slicewise.proj, b))


def test_compose_arities():
    q = parse_poly("poly\nbase: y\nop n y y : -> y\n")  # one binary op
    qq = compose_polys(q, q)
    # a binary of binaries: ops are assignments of q-ops or nothing...
    # composite ops pair a root with a choice of op per slot
    for op in qq.ops:
        ar = qq.arity(op)
        assert ar in (2, 4)  # hole-free: both slots filled by n
    assert all(qq.tau(b) == "y" for b in qq.ops)


def test_compose_eval_bijection_random_pairs():
    rng = random.Random(5)
    sampler = PolySampler(P, max_ops=3, max_arity=2, seed=5)
    for _ in range(25):
        x, y, z = sampler.finset("x"), sampler.finset("y"), sampler.finset("z")
        p = sampler.poly(x, y, "p")
        q = sampler.poly(y, z, "q")
        s = random_slice(rng, x)
        bij = compose_eval_bijection(q, p, s)
        assert bij is not None


def test_identity_polynomial_evaluates_to_itself():
    rng = random.Random(7)
    x = FinSet(["y0", "y1"])
    s = random_slice(rng, x)
    out = evaluate_poly(id_poly(x), s)
    for b in x:
        assert len(fiber(out.proj, b)) == len(s.fiber(b))


def test_free_monad_constants():
    p = parse_poly("poly\nbase: y\nop c : -> y\n")
    fm = free_poly_monad(p, 8)
    assert fm.exact
    assert set(fm.star.ops.elements) == {"~y", "c()"}
    assert sorted(fm.star.arity(b) for b in fm.star.ops) == [0, 1]


def test_free_monad_successor_truncates():
    p = parse_poly("poly\nbase: y\nop s y : -> y\n")
    fm = free_poly_monad(p, 4)
    assert not fm.exact
    assert fm.mult is None
    assert len(fm.star.ops) == 5


def test_free_monad_fixpoint_equation():
    # an exact free monad satisfies star = y + Q(star) on tree counts:
    # each tree is a hole or an op with a well-typed tree per slot
    p = parse_poly("poly\nbase: y1 y2\nop c : -> y1\nop g y1 : -> y2\n")
    fm = free_poly_monad(p, 8)
    assert fm.exact
    star = fm.star
    by_output = {y: [t for t in star.ops if star.tau(t) == y] for y in p.src}
    count = len(p.src)
    for b in p.ops:
        prod = 1
        for e in p.op_slots(b):
            prod *= len(by_output[p.sigma(e)])
        count += prod
    assert len(star.ops) == count


def test_parse_poly_errors():
    with pytest.raises(ParseError):
        parse_poly("poly\nbase: y\nop c : -> z\n")
    with pytest.raises(ParseError):
        parse_poly("graph\nnodes: a\n")


def test_cartesian_square_validation():
    # a non-bijective fiber map is rejected at construction
    from dblcat.poly import PolySquare
    from dblcat.finset import identity

    x = FinSet(["y"])
    p = parse_poly("poly\nbase: y\nop n y y : -> y\n")
    q = parse_poly("poly\nbase: y\nop m y : -> y\n")
    with pytest.raises(Exception):
        PolySquare(
            p, q, identity(x), identity(x),
            FinFun(p.ops, q.ops, ("m",)),
            FinFun(p.slots, q.slots, ("m.0", "m.0")),
        )
