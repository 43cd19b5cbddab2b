"""Finite sets and total functions: the ambient category.

Everything else in the package (spans, polynomials, the double-category
machinery) bottoms out in the constructions here.  Elements are opaque
strings; sets remember the order of their elements, and all composite
constructions (pullbacks, coproducts, dependent products) name their
elements deterministically so that repeating a construction yields an
equal value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

MAX_BIJECTION_SEARCH = 8


class FinSetError(Exception):
    pass


class CompositionError(FinSetError):
    pass


@dataclass(frozen=True)
class FinSet:
    """An ordered finite set of distinct element names."""

    elements: tuple[str, ...]

    def __init__(self, elements: Iterable[str]):
        elems = tuple(elements)
        if len(set(elems)) != len(elems):
            raise FinSetError(f"duplicate elements in {elems}")
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, name):
        return name in self.elements

    def index(self, name: str) -> int:
        return self.elements.index(name)

    def __repr__(self):
        return "{" + ", ".join(self.elements) + "}"


@dataclass(frozen=True)
class FinFun:
    """A total function between finite sets, given by its table."""

    dom: FinSet
    cod: FinSet
    table: tuple[str, ...] = field(default=())  # image of dom, in dom order

    def __init__(self, dom: FinSet, cod: FinSet, mapping):
        if isinstance(mapping, dict):
            missing = [x for x in dom if x not in mapping]
            if missing:
                raise FinSetError(f"table misses {missing}")
            extra = [x for x in mapping if x not in dom]
            if extra:
                raise FinSetError(f"table has spurious keys {extra}")
            table = tuple(mapping[x] for x in dom)
        else:
            table = tuple(mapping)
            if len(table) != len(dom):
                raise FinSetError("table length does not match domain")
        for y in table:
            if y not in cod:
                raise FinSetError(f"image {y!r} not in codomain {cod}")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "table", table)

    def __call__(self, x: str) -> str:
        return self.table[self.dom.index(x)]

    def as_dict(self) -> dict:
        return dict(zip(self.dom.elements, self.table))

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.table == self.dom.elements

    def is_bijection(self) -> bool:
        return len(set(self.table)) == len(self.cod) == len(self.dom)

    def inverse(self) -> "FinFun":
        if not self.is_bijection():
            raise FinSetError(f"{self} is not a bijection")
        back = {y: x for x, y in zip(self.dom, self.table)}
        return FinFun(self.cod, self.dom, back)

    def __repr__(self):
        pairs = ", ".join(f"{x}->{y}" for x, y in zip(self.dom, self.table))
        return f"FinFun[{pairs}]"


@dataclass(frozen=True)
class SliceObject:
    """An object of the slice over ``base``: a set with a projection."""

    total: FinSet
    base: FinSet
    proj: FinFun

    def __post_init__(self):
        if self.proj.dom != self.total or self.proj.cod != self.base:
            raise FinSetError("slice projection has wrong boundaries")

    def fiber(self, b: str) -> FinSet:
        return fiber(self.proj, b)


def identity(x: FinSet) -> FinFun:
    return FinFun(x, x, x.elements)


def compose_fun(g: FinFun, f: FinFun) -> FinFun:
    """g after f."""
    if f.cod != g.dom:
        raise CompositionError(f"cannot compose: {f.cod} != {g.dom}")
    return FinFun(f.dom, g.cod, tuple(g(y) for y in f.table))


def constant(dom: FinSet, cod: FinSet, value: str) -> FinFun:
    return FinFun(dom, cod, tuple(value for _ in dom))


def pair_name(a: str, b: str) -> str:
    return f"({a},{b})"


def pullback(f: FinFun, g: FinFun) -> tuple[FinSet, FinFun, FinFun]:
    """Pullback of f: A -> C against g: B -> C.

    The apex consists of pair names "(a,b)" with f(a) = g(b), ordered
    lexicographically by (index of a, index of b).
    """
    if f.cod != g.cod:
        raise CompositionError(f"pullback legs disagree: {f.cod} != {g.cod}")
    names, p1t, p2t = [], [], []
    for a in f.dom:
        for b in g.dom:
            if f(a) == g(b):
                names.append(pair_name(a, b))
                p1t.append(a)
                p2t.append(b)
    apex = FinSet(names)
    return apex, FinFun(apex, f.dom, tuple(p1t)), FinFun(apex, g.dom, tuple(p2t))


def pullback_mediate(apex: FinSet, z1: FinFun, z2: FinFun) -> FinFun:
    """The mediating map into a pullback apex from a cone (z1, z2)."""
    table = []
    for z in z1.dom:
        name = pair_name(z1(z), z2(z))
        if name not in apex:
            raise CompositionError(f"cone does not factor: {name} not in apex")
        table.append(name)
    return FinFun(z1.dom, apex, tuple(table))


def equalizer(f: FinFun, g: FinFun) -> tuple[FinSet, FinFun]:
    if f.dom != g.dom or f.cod != g.cod:
        raise CompositionError("equalizer needs parallel functions")
    kept = tuple(x for x in f.dom if f(x) == g(x))
    e = FinSet(kept)
    return e, FinFun(e, f.dom, kept)


def coproduct(a: FinSet, b: FinSet) -> tuple[FinSet, FinFun, FinFun]:
    """Disjoint union with tagged copies of a, then b."""
    left = tuple(f"inl({x})" for x in a)
    right = tuple(f"inr({x})" for x in b)
    s = FinSet(left + right)
    return s, FinFun(a, s, left), FinFun(b, s, right)


def copair(s: FinSet, inl: FinFun, inr: FinFun, f: FinFun, g: FinFun) -> FinFun:
    """[f, g]: S -> Z for f: A -> Z, g: B -> Z along the given injections."""
    if f.cod != g.cod:
        raise CompositionError("copair targets disagree")
    table = {}
    for x in inl.dom:
        table[inl(x)] = f(x)
    for x in inr.dom:
        table[inr(x)] = g(x)
    return FinFun(s, f.cod, table)


def fiber(f: FinFun, c: str) -> FinSet:
    if c not in f.cod:
        raise FinSetError(f"{c!r} not in codomain {f.cod}")
    return FinSet(x for x in f.dom if f(x) == c)


def pullback_slice(theta: FinFun, t: SliceObject) -> SliceObject:
    """Base change of a slice over theta's codomain along theta."""
    if t.base != theta.cod:
        raise CompositionError("slice base does not match theta codomain")
    apex, p1, _p2 = pullback(theta, t.proj)
    return SliceObject(apex, theta.dom, p1)


def section_name(b: str, graph: Sequence[tuple[str, str]]) -> str:
    body = ",".join(f"{e}:{v}" for e, v in graph)
    return f"sec({b};{body})"


def dependent_product(theta: FinFun, s: SliceObject) -> SliceObject:
    """Right adjoint to pullback along theta, computed fiberwise.

    The fiber over b consists of the sections of s over theta^-1(b),
    named by their graphs.
    """
    if s.base != theta.dom:
        raise CompositionError("slice base does not match theta domain")
    names, proj_table = [], []
    for b in theta.cod:
        fib = fiber(theta, b)
        choices = [list(s.fiber(e)) for e in fib]
        for combo in itertools.product(*choices):
            names.append(section_name(b, list(zip(fib, combo))))
            proj_table.append(b)
    total = FinSet(names)
    return SliceObject(total, theta.cod, FinFun(total, theta.cod, tuple(proj_table)))


def compose_slice(tau: FinFun, s: SliceObject) -> SliceObject:
    """Postcomposition Sigma_tau: slice over tau's domain to slice over its codomain."""
    if s.base != tau.dom:
        raise CompositionError("slice base does not match tau domain")
    return SliceObject(s.total, tau.cod, compose_fun(tau, s.proj))


def all_functions(a: FinSet, b: FinSet):
    """All FinFuns a -> b, in lexicographic table order."""
    if len(a) == 0:
        yield FinFun(a, b, ())
        return
    for table in itertools.product(b.elements, repeat=len(a)):
        yield FinFun(a, b, table)


def find_commuting_bijection(
    a: FinSet,
    b: FinSet,
    constraints: Sequence[tuple[FinFun, FinFun]] = (),
) -> Optional[FinFun]:
    """Search for a bijection beta: a -> b with g o beta = f for each (f, g).

    Exhaustive over permutations; refuses sets larger than
    MAX_BIJECTION_SEARCH.  Returns None when no such bijection exists.
    """
    for f, g in constraints:
        if f.dom != a or g.dom != b:
            raise FinSetError("constraint legs have wrong domains")
        if f.cod != g.cod:
            raise FinSetError("constraint pair has mismatched codomains")
    if len(a) != len(b):
        return None
    if len(a) > MAX_BIJECTION_SEARCH:
        raise FinSetError(
            f"bijection search refused: |{a}| = {len(a)} > {MAX_BIJECTION_SEARCH}"
        )
    # Precompute per-element candidates to prune the permutation search.
    candidates = []
    for x in a:
        ok = tuple(
            y for y in b if all(g(y) == f(x) for f, g in constraints)
        )
        if not ok:
            return None
        candidates.append(ok)

    used: set[str] = set()
    assignment: list[str] = []

    def extend(i: int) -> bool:
        if i == len(a):
            return True
        for y in candidates[i]:
            if y in used:
                continue
            used.add(y)
            assignment.append(y)
            if extend(i + 1):
                return True
            used.discard(y)
            assignment.pop()
        return False

    if extend(0):
        return FinFun(a, b, tuple(assignment))
    return None
