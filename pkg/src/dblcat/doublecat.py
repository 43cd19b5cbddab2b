"""The abstract double-category interface and pasting machinery.

A double category is presented as a capability record (a subclass of
DoubleCategory) supplying cell operations, coherence isomorphisms and
optional extras (framing, local coproducts, equalizers of squares, free
monads on endomorphisms).  The generic layer treats horizontal arrows
and squares as opaque payloads and only manipulates them through the
instance's own operations.

Horizontal composition is associative and unital only up to coherent
invertible globular squares, so every construction that pastes cells of
mismatched bracketing goes through explicit coherence squares.  The
normal form of a horizontal arrow is the left fold of its list of
leaves; `canonical_iso` produces the unique coherence isomorphism
between two bracketings of the same leaves, built from associators and
unitors.

Composition conventions, used consistently everywhere:
  * hcomp(g, f) is g after f (f is the inner/first arrow);
  * a row of squares is listed in diagram order, leftmost (innermost)
    first, so the composite top of [s1, s2, s3] is
    hcomp(t3, hcomp(t2, t1));
  * vcomp(s2, s1) stacks s1 on top of s2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Any, Callable, Optional


class DoubleCatError(Exception):
    pass


class BoundaryError(DoubleCatError):
    pass


class PastingError(DoubleCatError):
    """A grid failed to compose; the message names the offending cell."""


class CapabilityError(DoubleCatError):
    """A construction needed a capability the instance does not supply."""


@dataclass(frozen=True)
class Iso:
    """An invertible globular square, packaged with its inverse."""

    fwd: Any
    inv: Any


@dataclass(frozen=True)
class FramedArrow:
    """Companion/conjoint data for a vertical arrow u: X -> X'.

    companion: X -> X', conjoint: X' -> X, and the four binding squares:
      alpha: top companion, bottom hid(X'), left u, right id;
      beta:  top conjoint,  bottom hid(X'), left id, right u;
      gamma: top hid(X),    bottom conjoint, left u, right id;
      delta: top hid(X),    bottom companion, left id, right u.
    """

    u: Any
    companion: Any
    conjoint: Any
    alpha: Any
    beta: Any
    gamma: Any
    delta: Any


@dataclass(frozen=True)
class LocalCoproduct:
    """Coproduct of parallel horizontal arrows in a hom-category."""

    arrow: Any
    inj1: Any  # globular square: first summand -> arrow
    inj2: Any
    copair: Callable[[Any, Any], Any]  # two globular squares out of the summands


@dataclass(frozen=True)
class Equalizer1:
    """Equalizer of a parallel pair of globular squares, in C_1."""

    arrow: Any
    include: Any  # globular square: arrow -> common top of the pair
    mediate: Callable[[Any], Any]  # factor a square equalizing the pair


@dataclass(frozen=True)
class HorMonad:
    """A monad in the horizontal 2-category: arrow P: X -> X with
    globular mult: H(P,P) -> P and unit: hid(X) -> P."""

    arrow: Any
    mult: Any
    unit: Any


@dataclass(frozen=True)
class FreeMonadInH:
    """The free monad on an endomorphism arrow, in the horizontal
    2-category, together with the inclusion of generators."""

    endo: Any  # P
    star: Any  # P*
    mult: Any  # mu: H(P*,P*) -> P*
    unit: Any  # eta: hid(X) -> P*
    iota: Any  # iota: P -> P*
    exact: bool

    def as_monad(self) -> HorMonad:
        return HorMonad(self.star, self.mult, self.unit)


@dataclass(frozen=True)
class CellPath:
    """A rectangular pasting diagram: rows of squares, top row first,
    each row in diagram order (innermost cell first)."""

    rows: tuple

    def __init__(self, rows):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))


class DoubleCategory:
    """Capability record for a double category.

    Subclasses implement the cell operations; the generic functions in
    this module (nf_iso, paste, squares_equal_mod_coherence, ...) work
    uniformly over any instance.
    """

    name = "abstract"

    # -- horizontal arrows ------------------------------------------------
    def hsrc(self, f):
        raise NotImplementedError

    def htgt(self, f):
        raise NotImplementedError

    def hid(self, x):
        raise NotImplementedError

    def hcomp(self, g, f):
        raise NotImplementedError

    # -- vertical arrows --------------------------------------------------
    def vsrc(self, u):
        raise NotImplementedError

    def vtgt(self, u):
        raise NotImplementedError

    def vid(self, x):
        raise NotImplementedError

    def vcomp(self, v, u):
        """v after u."""
        raise NotImplementedError

    def is_vid(self, u) -> bool:
        return u == self.vid(self.vsrc(u))

    # -- squares ----------------------------------------------------------
    def sq_top(self, s):
        raise NotImplementedError

    def sq_bottom(self, s):
        raise NotImplementedError

    def sq_left(self, s):
        raise NotImplementedError

    def sq_right(self, s):
        raise NotImplementedError

    def sq_vid(self, f):
        """The identity square on a horizontal arrow f."""
        raise NotImplementedError

    def sq_hid(self, u):
        """The horizontal identity square on a vertical arrow u."""
        raise NotImplementedError

    def sq_hcomp(self, s2, s1):
        raise NotImplementedError

    def sq_vcomp(self, s2, s1):
        """s1 on top of s2."""
        raise NotImplementedError

    def sq_eq(self, s1, s2) -> bool:
        return s1 == s2

    def is_globular(self, s) -> bool:
        return self.is_vid(self.sq_left(s)) and self.is_vid(self.sq_right(s))

    # -- coherence --------------------------------------------------------
    def associator(self, h, g, f) -> Iso:
        """Iso H(H(h,g),f) -> H(h,H(g,f))."""
        raise NotImplementedError

    def lunitor(self, f) -> Iso:
        """Iso H(hid(tgt), f) -> f."""
        raise NotImplementedError

    def runitor(self, f) -> Iso:
        """Iso H(f, hid(src)) -> f."""
        raise NotImplementedError

    def hor_leaves(self, f) -> list:
        """Decompose f into its list of non-identity leaves, inner
        first, following the construction metadata on the arrow."""
        origin = getattr(f, "origin", None)
        if origin is None:
            return [f]
        if origin[0] == "id":
            return []
        if origin[0] == "comp":
            g, inner = origin[1], origin[2]
            return self.hor_leaves(inner) + self.hor_leaves(g)
        return [f]

    def hor_isos(self, f, g):
        """All invertible globular squares f -> g (possibly none)."""
        raise CapabilityError(f"{self.name}: no horizontal-iso search")

    def hor_iso(self, f, g) -> Optional[Iso]:
        for iso in self.hor_isos(f, g):
            return iso
        return None

    # -- optional capabilities --------------------------------------------
    has_framed = False
    has_local_coproducts = False
    has_equalizers = False
    has_free_monads = False

    def framed(self, u) -> FramedArrow:
        raise CapabilityError(f"{self.name}: not framed")

    def local_coproduct(self, f, g) -> LocalCoproduct:
        raise CapabilityError(f"{self.name}: no local coproducts")

    def equalizer1(self, s1, s2) -> Equalizer1:
        raise CapabilityError(f"{self.name}: no equalizers of squares")

    def free_monad(self, p, bound: int) -> FreeMonadInH:
        raise CapabilityError(f"{self.name}: no free monads")

    def free_sharp(self, free: FreeMonadInH, target: HorMonad, f, phi):
        """The unique lift phi^sharp: H(free.star, f) -> H(f, target.arrow)
        of an endomorphism map phi: H(free.endo, f) -> H(f, target.arrow)
        whose source is the monad `target`."""
        raise CapabilityError(f"{self.name}: no free monads")

    def enumerate_squares(self, top, bottom, u, v):
        """All squares with the given boundary (for uniqueness checks)."""
        raise CapabilityError(f"{self.name}: no square enumeration")


# ---------------------------------------------------------------------------
# Iso algebra


def iso_id(c: DoubleCategory, f) -> Iso:
    s = c.sq_vid(f)
    return Iso(s, s)


def iso_vcomp(c: DoubleCategory, j: Iso, i: Iso) -> Iso:
    """First i, then j (composition in C_1)."""
    return Iso(c.sq_vcomp(j.fwd, i.fwd), c.sq_vcomp(i.inv, j.inv))


def iso_hcomp(c: DoubleCategory, j: Iso, i: Iso) -> Iso:
    """Horizontal (side-by-side) composite, i innermost."""
    return Iso(c.sq_hcomp(j.fwd, i.fwd), c.sq_hcomp(j.inv, i.inv))


def iso_inverse(i: Iso) -> Iso:
    return Iso(i.inv, i.fwd)


# ---------------------------------------------------------------------------
# Normal forms and canonical coherence


def fold_arrow(c: DoubleCategory, leaves, src):
    """The canonical (left-fold) composite of a list of leaves."""
    if not leaves:
        return c.hid(src)
    acc = leaves[0]
    for leaf in leaves[1:]:
        acc = c.hcomp(leaf, acc)
    return acc


def _merge_iso(c: DoubleCategory, a, la, b, lb) -> Iso:
    """Iso H(b, a) -> fold(la + lb), where a = fold(la), b = fold(lb)."""
    if not lb:
        return c.lunitor(a)
    if not la:
        return c.runitor(b)
    if len(lb) == 1:
        return iso_id(c, c.hcomp(b, a))
    lb0, blast = lb[:-1], lb[-1]
    b0 = fold_arrow(c, lb0, c.htgt(a))
    assoc = c.associator(blast, b0, a)
    inner = _merge_iso(c, a, la, b0, lb0)
    whisk = iso_hcomp(c, iso_id(c, blast), inner)
    return iso_vcomp(c, whisk, assoc)


def nf_iso(c: DoubleCategory, f):
    """Return (leaves, iso: f -> fold(leaves))."""
    origin = getattr(f, "origin", None)
    if origin is None or origin[0] not in ("id", "comp"):
        return [f], iso_id(c, f)
    if origin[0] == "id":
        return [], iso_id(c, f)
    g, inner = origin[1], origin[2]
    li, ii = nf_iso(c, inner)
    lg, ig = nf_iso(c, g)
    whisk = iso_hcomp(c, ig, ii)
    a = fold_arrow(c, li, c.hsrc(inner))
    b = fold_arrow(c, lg, c.hsrc(g))
    merge = _merge_iso(c, a, li, b, lg)
    return li + lg, iso_vcomp(c, merge, whisk)


def canonical_iso(c: DoubleCategory, f1, f2) -> Iso:
    """The coherence isomorphism f1 -> f2 between two bracketings of the
    same list of leaves."""
    l1, i1 = nf_iso(c, f1)
    l2, i2 = nf_iso(c, f2)
    if l1 != l2:
        raise BoundaryError(
            f"no canonical iso: leaf lists differ ({len(l1)} vs {len(l2)} leaves)"
        )
    return iso_vcomp(c, iso_inverse(i2), i1)


def retarget(c: DoubleCategory, s, new_top, new_bottom):
    """Conjugate a square by canonical coherences so that its boundary
    arrows become new_top / new_bottom (same leaves required)."""
    out = s
    if c.sq_top(s) != new_top:
        it = canonical_iso(c, new_top, c.sq_top(s))
        out = c.sq_vcomp(out, it.fwd)
    if c.sq_bottom(out) != new_bottom:
        ib = canonical_iso(c, c.sq_bottom(out), new_bottom)
        out = c.sq_vcomp(ib.fwd, out)
    return out


# ---------------------------------------------------------------------------
# Pasting


def paste(c: DoubleCategory, grid):
    """Evaluate a rectangular pasting diagram.

    Rows are composed horizontally, then stacked top to bottom with
    canonical coherence squares inserted wherever the bottom of one row
    and the top of the next are different bracketings of the same
    leaves.
    """
    rows = grid.rows if isinstance(grid, CellPath) else [tuple(r) for r in grid]
    if not rows or any(not r for r in rows):
        raise PastingError("empty grid or empty row")
    composed = []
    for i, row in enumerate(rows):
        acc = row[0]
        for j, cell in enumerate(row[1:], start=1):
            try:
                acc = c.sq_hcomp(cell, acc)
            except Exception as exc:
                raise PastingError(f"row {i}, cell {j}: {exc}") from exc
        composed.append(acc)
    result = composed[0]
    for i, nxt in enumerate(composed[1:], start=1):
        bottom, top = c.sq_bottom(result), c.sq_top(nxt)
        if bottom != top:
            try:
                coh = canonical_iso(c, bottom, top)
            except BoundaryError as exc:
                raise PastingError(f"between rows {i-1} and {i}: {exc}") from exc
            result = c.sq_vcomp(coh.fwd, result)
        try:
            result = c.sq_vcomp(nxt, result)
        except Exception as exc:
            raise PastingError(f"stacking row {i}: {exc}") from exc
    return result


_ISO_SEARCH_CAP = 2000


def squares_equal_mod_coherence(c: DoubleCategory, s1, s2) -> bool:
    """Equality of squares under the strictness convention: strict
    equality, or equality after conjugating by canonical coherence
    isomorphisms; for boundaries that are not bracketings of the same
    leaves, an exhaustive search over invertible globular squares."""
    if c.sq_left(s1) != c.sq_left(s2) or c.sq_right(s1) != c.sq_right(s2):
        return False
    if c.sq_eq(s1, s2):
        return True
    t1, b1 = c.sq_top(s1), c.sq_bottom(s1)
    t2, b2 = c.sq_top(s2), c.sq_bottom(s2)
    lt1, _ = nf_iso(c, t1)
    lt2, _ = nf_iso(c, t2)
    lb1, _ = nf_iso(c, b1)
    lb2, _ = nf_iso(c, b2)
    if lt1 == lt2 and lb1 == lb2:
        return c.sq_eq(s1, retarget(c, s2, t1, b1))
    # Genuinely different boundary arrows: search for witnesses.
    pairs = (
        (it, ib)
        for it in c.hor_isos(t1, t2)
        for ib in c.hor_isos(b1, b2)
    )
    for it, ib in islice(pairs, _ISO_SEARCH_CAP):
        if c.sq_eq(s1, c.sq_vcomp(ib.inv, c.sq_vcomp(s2, it.fwd))):
            return True
    return False


# ---------------------------------------------------------------------------
# Derived framed-structure squares


def eta_square(c: DoubleCategory, fr: FramedArrow):
    """The unit hid(X) -> H(conjoint, companion) of the companion/conjoint
    adjunction, pasted from delta and gamma."""
    x = c.vsrc(fr.u)
    row = c.sq_hcomp(fr.gamma, fr.delta)
    fix = canonical_iso(c, c.hid(x), c.sq_top(row))
    return c.sq_vcomp(row, fix.fwd)


def epsilon_square(c: DoubleCategory, fr: FramedArrow):
    """The counit H(companion, conjoint) -> hid(X'), pasted from beta
    and alpha."""
    x1 = c.vtgt(fr.u)
    row = c.sq_hcomp(fr.alpha, fr.beta)
    fix = canonical_iso(c, c.sq_bottom(row), c.hid(x1))
    return c.sq_vcomp(fix.fwd, row)


# ---------------------------------------------------------------------------
# Trivial-vertical restriction (the double category with only identity
# vertical arrows over a given horizontal 2-category)


class TrivialVertical(DoubleCategory):
    """Restrict a double category to identity vertical arrows only.

    The result has the same horizontal 2-category as the base; its
    squares are exactly the globular squares.  Monads in it coincide
    with monads in the horizontal 2-category, which is what lets the
    2-categorical and double-categorical constructions be cross-checked
    against each other.
    """

    def __init__(self, base: DoubleCategory):
        self.base = base
        self.name = f"{base.name}-trivial-vertical"
        self.has_local_coproducts = base.has_local_coproducts
        self.has_equalizers = base.has_equalizers
        self.has_free_monads = base.has_free_monads

    def _check_vid(self, u):
        if not self.base.is_vid(u):
            raise BoundaryError("only identity vertical arrows exist here")
        return u

    def hsrc(self, f):
        return self.base.hsrc(f)

    def htgt(self, f):
        return self.base.htgt(f)

    def hid(self, x):
        return self.base.hid(x)

    def hcomp(self, g, f):
        return self.base.hcomp(g, f)

    def vsrc(self, u):
        return self.base.vsrc(u)

    def vtgt(self, u):
        return self.base.vtgt(u)

    def vid(self, x):
        return self.base.vid(x)

    def vcomp(self, v, u):
        return self.base.vcomp(self._check_vid(v), self._check_vid(u))

    def sq_top(self, s):
        return self.base.sq_top(s)

    def sq_bottom(self, s):
        return self.base.sq_bottom(s)

    def sq_left(self, s):
        return self.base.sq_left(s)

    def sq_right(self, s):
        return self.base.sq_right(s)

    def sq_vid(self, f):
        return self.base.sq_vid(f)

    def sq_hid(self, u):
        return self.base.sq_hid(self._check_vid(u))

    def _check_sq(self, s):
        if not self.base.is_globular(s):
            raise BoundaryError("square has non-identity vertical boundary")
        return s

    def sq_hcomp(self, s2, s1):
        return self.base.sq_hcomp(self._check_sq(s2), self._check_sq(s1))

    def sq_vcomp(self, s2, s1):
        return self.base.sq_vcomp(self._check_sq(s2), self._check_sq(s1))

    def sq_eq(self, s1, s2):
        return self.base.sq_eq(s1, s2)

    def associator(self, h, g, f):
        return self.base.associator(h, g, f)

    def lunitor(self, f):
        return self.base.lunitor(f)

    def runitor(self, f):
        return self.base.runitor(f)

    def hor_leaves(self, f):
        return self.base.hor_leaves(f)

    def hor_isos(self, f, g):
        return self.base.hor_isos(f, g)

    def local_coproduct(self, f, g):
        return self.base.local_coproduct(f, g)

    def equalizer1(self, s1, s2):
        return self.base.equalizer1(s1, s2)

    def free_monad(self, p, bound):
        return self.base.free_monad(p, bound)

    def free_sharp(self, free, target, f, phi):
        return self.base.free_sharp(free, target, f, phi)

    def enumerate_squares(self, top, bottom, u, v):
        self._check_vid(u)
        self._check_vid(v)
        return self.base.enumerate_squares(top, bottom, u, v)


def trivial_vertical_instance(base: DoubleCategory) -> TrivialVertical:
    return TrivialVertical(base)
