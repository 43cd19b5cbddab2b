import io
import os

import pytest

from dblcat.cli import run

HERE = os.path.dirname(__file__)


def fixture(name):
    return os.path.join(HERE, "fixtures", name)


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_free_cat_chain():
    code, out = call("free-cat", fixture("chain.graph"))
    assert code == 0
    assert out.count("morphism ") == 6
    assert "exact: true" in out
    assert "compose f ; h = f.h" in out


def test_free_cat_loop_truncates():
    code, out = call("free-cat", fixture("loop.graph"), "--max-length", "3")
    assert code == 0
    assert out.count("morphism ") == 4
    assert "exact: false" in out
    assert "partial" in out


def test_free_monad_const():
    code, out = call("free-monad", fixture("const.poly"))
    assert code == 0
    assert out.count("tree ") == 2
    assert "exact: true" in out
    assert "mu: " in out


def test_free_monad_succ_truncates():
    code, out = call("free-monad", fixture("succ.poly"), "--max-depth", "4")
    assert code == 0
    assert out.count("tree ") == 5
    assert "exact: false" in out


def test_laws_span_and_poly():
    for inst in ("span", "poly"):
        code, out = call("laws", inst, "--size", "2", "--trials", "40", "--seed", "1")
        assert code == 0, out
        assert f"SUITE double-axioms-{inst} PASS" in out
        assert f"SUITE framed-{inst} PASS" in out


def test_laws_deterministic():
    a = call("laws", "span", "--size", "2", "--trials", "30", "--seed", "5")
    b = call("laws", "span", "--size", "2", "--trials", "30", "--seed", "5")
    assert a[0] == b[0]
    # report lines (not timings) agree
    lines = lambda s: [l for l in s.splitlines() if l.startswith("SUITE")]
    assert lines(a[1]) == lines(b[1])


def test_check_universal_chain():
    code, out = call("check-universal", fixture("chain.graph"), "--target-size", "3")
    assert code == 0, out
    assert "SUITE universal-span PASS" in out
    assert "SUITE pipeline-span PASS" in out


def test_check_universal_poly():
    code, out = call("check-universal", fixture("const.poly"))
    assert code == 0, out
    assert "SUITE universal-poly PASS" in out
    assert "SUITE pipeline-poly PASS" in out


def test_check_universal_truncated_is_input_error():
    code, _ = call("check-universal", fixture("loop.graph"))
    assert code == 2


def test_compose_graphs():
    code, out = call("compose", fixture("chain.graph"), fixture("chain.graph"))
    assert code == 0
    assert "(f,h): a -> c" in out


def test_input_errors_exit_2(tmp_path):
    assert call("free-cat", str(tmp_path / "missing.graph"))[0] == 2
    assert call("free-cat", fixture("const.poly"))[0] == 2
    bad = tmp_path / "bad.graph"
    bad.write_text("graph\nnodes: a\nedge f a z\n")
    assert call("free-cat", str(bad))[0] == 2
    assert call("frobnicate")[0] == 2
