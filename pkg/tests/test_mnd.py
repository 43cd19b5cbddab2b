import pytest

from dblcat import mnd
from dblcat.doublecat import squares_equal_mod_coherence
from dblcat.finset import FinFun, FinSet, all_functions
from dblcat.lawcheck import PolySampler, SpanSampler, enumerate_span_monads
from dblcat.mnd import (
    EndInstance,
    Endomorphism,
    MonadObj,
    VertEndoMap,
    as_endo,
    base_change_endo,
    base_change_monad,
    cartesian_factor_unique,
    cofold,
    free_monad_adjunction,
    identity_scenario,
    uncofold,
)
from dblcat.poly import PolyInstance
from dblcat.span import SpanInstance, span_from_relation

S = SpanInstance()
P = PolyInstance()


def sample_vert_maps(sampler, n):
    """Pushforward vertical endomorphism maps: an endo on X pushed
    along a vertical arrow u gives a square over (u, u)."""
    out = []
    while len(out) < n:
        x = sampler.finset("x")
        p = (sampler.span if hasattr(sampler, "span") else sampler.poly)(x, x)
        u = sampler.fun(x, sampler.finset("z"))
        sq = sampler.pushforward(p, u, u)
        dom = Endomorphism(x, p)
        cod = Endomorphism(u.cod, sq.bottom)
        out.append(VertEndoMap(dom, cod, u, sq))
    return out


@pytest.mark.parametrize("instance,sampler_cls", [(S, SpanSampler), (P, PolySampler)])
def test_cofold_uncofold_roundtrip(instance, sampler_cls):
    sampler = sampler_cls(instance, seed=17)
    for vm in sample_vert_maps(sampler, 30):
        h = cofold(instance, vm)
        back = uncofold(instance, h)
        assert back.u == vm.u
        assert instance.sq_eq(back.square, vm.square)
        again = cofold(instance, back)
        assert again.f == h.f
        assert instance.sq_eq(again.phi, h.phi)


def chain_bundle():
    X = FinSet(["p", "q"])
    edge = span_from_relation(X, X, [("e", "p", "q")])
    return free_monad_adjunction(S, Endomorphism(X, edge))


def chain_target():
    A = FinSet(["a", "b", "c"])
    chain = span_from_relation(A, A, [("f", "a", "b"), ("h", "b", "c")])
    return free_monad_adjunction(S, Endomorphism(A, chain)).monad


def a_vert_map(bundle, target):
    u = FinFun(bundle.endo.obj, target.obj, {"p": "a", "q": "b"})
    sq = next(iter(S.enumerate_squares(bundle.endo.arrow, target.arrow, u, u)))
    return VertEndoMap(bundle.endo, as_endo(target), u, sq)


def test_free_bundle_is_a_monad():
    bundle = chain_bundle()
    assert mnd.monad_laws_ok(S, bundle.monad.hor()) is None
    assert bundle.free.exact


def test_vertical_sharp_is_monad_map_and_factors():
    bundle = chain_bundle()
    target = chain_target()
    vm = a_vert_map(bundle, target)
    sharp = bundle.vertical_sharp(target, vm)
    assert mnd.vert_monad_map_ok(S, bundle.monad.hor(), target.hor(), sharp) is None
    assert S.sq_eq(S.sq_vcomp(sharp.square, bundle.unit_map.square), vm.square)


def test_cofold_sends_monad_maps_to_monad_maps():
    bundle = chain_bundle()
    target = chain_target()
    sharp = bundle.vertical_sharp(target, a_vert_map(bundle, target))
    folded = cofold(S, sharp)
    # cofold swaps dom and cod: the horizontal map goes out of the target
    assert mnd.hor_monad_map_ok(S, target.hor(), bundle.monad.hor(), folded) is None


def test_base_change_monad_laws_and_lift():
    target = chain_target()
    X = FinSet(["s", "t"])
    u = FinFun(X, target.obj, {"s": "a", "t": "b"})
    changed, lift = base_change_monad(S, u, target)
    assert mnd.monad_laws_ok(S, changed.hor()) is None
    assert mnd.vert_monad_map_ok(S, changed.hor(), target.hor(), lift) is None


def test_base_change_lift_is_cartesian():
    # unique factorization over every enumerated factorization, and the
    # underlying endo lift (forgetting the monad structure) is cartesian
    # for the same reason
    A = FinSet(["a", "b"])
    tgt_arrow = span_from_relation(A, A, [("f", "a", "b"), ("g", "b", "b")])
    target = Endomorphism(A, tgt_arrow)
    X = FinSet(["s", "t"])
    u = FinFun(X, A, {"s": "a", "t": "b"})
    endo, lift = base_change_endo(S, u, target)
    W = FinSet(["w0", "w1"])
    source = span_from_relation(W, W, [("k", "w0", "w1")])
    for w in all_functions(W, X):
        assert cartesian_factor_unique(S, lift, source, w)


def test_endo_square_condition_identity_scenario():
    bundle = chain_bundle()
    target = chain_target()
    vm = a_vert_map(bundle, target)
    alpha = identity_scenario(S, bundle.endo, target, vm)
    end = EndInstance(S)
    assert end.square_condition(alpha)


def test_equalizer_witness_theta_iso():
    bundle = chain_bundle()
    vm = bundle.unit_map
    alpha = identity_scenario(S, bundle.endo, bundle.monad, vm)
    sharped = bundle.general_sharp(bundle, alpha)
    witness = mnd.equalizer_witness(S, sharped, bundle)
    assert witness.diag1_ok and witness.diag2_ok
    assert witness.theta_inv is not None
    eqs = mnd.pipeline_equations(S, bundle, bundle, alpha, sharped, witness)
    for name, (lhs, rhs) in eqs.items():
        assert squares_equal_mod_coherence(S, lhs, rhs), name


def test_sharp_unique_against_enumerated_monads():
    bundle = chain_bundle()
    targets = list(enumerate_span_monads(FinSet(["t0", "t1"]), 3))
    star = bundle.monad
    found_any = False
    for target in targets[:10]:
        for u in all_functions(bundle.endo.obj, target.obj):
            for sq in S.enumerate_squares(bundle.endo.arrow, target.arrow, u, u):
                vm = VertEndoMap(bundle.endo, as_endo(target), u, sq)
                sharp = bundle.vertical_sharp(target, vm)
                assert (
                    mnd.vert_monad_map_ok(S, star.hor(), target.hor(), sharp) is None
                )
                found_any = True
    assert found_any
