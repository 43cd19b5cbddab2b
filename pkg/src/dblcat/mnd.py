"""Endomorphisms and monads inside a double category.

Builds, over any DoubleCategory instance: the double category End(C) of
horizontal endomorphisms, the double category Mnd(C) of monads, the
forgetful functor between them, base change of endomorphisms and monads
along a vertical arrow (using companions and conjoints), the cofolding
bijection between vertical endomorphism maps and horizontal maps out of
a conjoint, and the assembly of free monads: for each endomorphism a
monad on its free horizontal monad together with the universal maps
(vertical sharp, star of a horizontal map, sharp of a square) and the
equalizer witness used to verify their compatibility.

All displayed equations are compared modulo canonical coherence
isomorphisms (squares_equal_mod_coherence).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from . import doublecat as dc
from .doublecat import (
    BoundaryError,
    CapabilityError,
    CellPath,
    DoubleCategory,
    FreeMonadInH,
    HorMonad,
    Iso,
    canonical_iso,
    paste,
    retarget,
    squares_equal_mod_coherence,
)


# ---------------------------------------------------------------------------
# Cells of End(C) and Mnd(C)


@dataclass(frozen=True)
class Endomorphism:
    """An object together with a horizontal endo-arrow on it."""

    obj: Any
    arrow: Any


@dataclass(frozen=True)
class MonadObj:
    """A horizontal monad, kept with its underlying object."""

    obj: Any
    arrow: Any
    mult: Any
    unit: Any

    def hor(self) -> HorMonad:
        return HorMonad(self.arrow, self.mult, self.unit)


def as_endo(x) -> Endomorphism:
    if isinstance(x, Endomorphism):
        return x
    return Endomorphism(x.obj, x.arrow)


@dataclass(frozen=True)
class HorEndoMap:
    """A horizontal map (F, phi): (X, P) -> (Y, Q).

    F: X -> Y is a horizontal arrow and phi a globular square
    H(Q, F) -> H(F, P)."""

    dom: Any  # Endomorphism or MonadObj
    cod: Any
    f: Any
    phi: Any
    origin: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VertEndoMap:
    """A vertical map (u, ubar): (X, P) -> (X', P'): a square with top P,
    bottom P' and both verticals u."""

    dom: Any
    cod: Any
    u: Any
    square: Any


@dataclass(frozen=True)
class EndoSquare:
    """A square of End(C): an underlying square between the horizontal
    components, compatible with the four boundary maps."""

    top: HorEndoMap
    bottom: HorEndoMap
    left: VertEndoMap
    right: VertEndoMap
    alpha: Any


class EndInstance(DoubleCategory):
    """The double category of endomorphisms in a base double category."""

    def __init__(self, base: DoubleCategory):
        self.base = base
        self.name = f"end({base.name})"

    # -- horizontal -------------------------------------------------------
    def hsrc(self, h: HorEndoMap):
        return h.dom

    def htgt(self, h: HorEndoMap):
        return h.cod

    def hid(self, e) -> HorEndoMap:
        b, p = self.base, e.arrow
        phi = b.sq_vcomp(b.lunitor(p).inv, b.runitor(p).fwd)
        return HorEndoMap(e, e, b.hid(e.obj), phi, origin=("id", e))

    def hcomp(self, g: HorEndoMap, f: HorEndoMap) -> HorEndoMap:
        if f.cod != g.dom:
            raise BoundaryError("endomorphism maps do not align")
        b = self.base
        big_f, big_g = f.f, g.f
        gf = b.hcomp(big_g, big_f)
        p = f.dom.arrow
        r = g.cod.arrow
        chi = paste(
            b,
            CellPath([
                [b.sq_vid(big_f), g.phi],
                [f.phi, b.sq_vid(big_g)],
            ]),
        )
        chi = retarget(b, chi, b.hcomp(r, gf), b.hcomp(gf, p))
        return HorEndoMap(f.dom, g.cod, gf, chi, origin=("comp", g, f))

    # -- vertical ---------------------------------------------------------
    def vsrc(self, m: VertEndoMap):
        return m.dom

    def vtgt(self, m: VertEndoMap):
        return m.cod

    def vid(self, e) -> VertEndoMap:
        b = self.base
        return VertEndoMap(e, e, b.vid(e.obj), b.sq_vid(e.arrow))

    def vcomp(self, n: VertEndoMap, m: VertEndoMap) -> VertEndoMap:
        if m.cod != n.dom:
            raise BoundaryError("vertical endomorphism maps do not align")
        b = self.base
        return VertEndoMap(
            m.dom, n.cod, b.vcomp(n.u, m.u), b.sq_vcomp(n.square, m.square)
        )

    # -- squares ----------------------------------------------------------
    def sq_top(self, s: EndoSquare):
        return s.top

    def sq_bottom(self, s: EndoSquare):
        return s.bottom

    def sq_left(self, s: EndoSquare):
        return s.left

    def sq_right(self, s: EndoSquare):
        return s.right

    def sq_vid(self, h: HorEndoMap) -> EndoSquare:
        return EndoSquare(h, h, self.vid(h.dom), self.vid(h.cod),
                          self.base.sq_vid(h.f))

    def sq_hid(self, m: VertEndoMap) -> EndoSquare:
        return EndoSquare(self.hid(m.dom), self.hid(m.cod), m, m,
                          self.base.sq_hid(m.u))

    def sq_hcomp(self, s2: EndoSquare, s1: EndoSquare) -> EndoSquare:
        if s1.right != s2.left:
            raise BoundaryError("endomorphism squares do not align horizontally")
        return EndoSquare(
            self.hcomp(s2.top, s1.top),
            self.hcomp(s2.bottom, s1.bottom),
            s1.left,
            s2.right,
            self.base.sq_hcomp(s2.alpha, s1.alpha),
        )

    def sq_vcomp(self, s2: EndoSquare, s1: EndoSquare) -> EndoSquare:
        if s1.bottom != s2.top:
            raise BoundaryError("endomorphism squares do not align vertically")
        return EndoSquare(
            s1.top,
            s2.bottom,
            self.vcomp(s2.left, s1.left),
            self.vcomp(s2.right, s1.right),
            self.base.sq_vcomp(s2.alpha, s1.alpha),
        )

    def sq_eq(self, s1: EndoSquare, s2: EndoSquare) -> bool:
        return (
            s1.top == s2.top
            and s1.bottom == s2.bottom
            and s1.left == s2.left
            and s1.right == s2.right
            and self.base.sq_eq(s1.alpha, s2.alpha)
        )

    # -- coherence --------------------------------------------------------
    def _glob(self, top: HorEndoMap, bottom: HorEndoMap, alpha) -> EndoSquare:
        return EndoSquare(top, bottom, self.vid(top.dom), self.vid(top.cod), alpha)

    def associator(self, h, g, f) -> Iso:
        i = self.base.associator(h.f, g.f, f.f)
        lhs = self.hcomp(self.hcomp(h, g), f)
        rhs = self.hcomp(h, self.hcomp(g, f))
        return Iso(self._glob(lhs, rhs, i.fwd), self._glob(rhs, lhs, i.inv))

    def lunitor(self, h) -> Iso:
        i = self.base.lunitor(h.f)
        lhs = self.hcomp(self.hid(h.cod), h)
        return Iso(self._glob(lhs, h, i.fwd), self._glob(h, lhs, i.inv))

    def runitor(self, h) -> Iso:
        i = self.base.runitor(h.f)
        lhs = self.hcomp(h, self.hid(h.dom))
        return Iso(self._glob(lhs, h, i.fwd), self._glob(h, lhs, i.inv))

    # -- validation -------------------------------------------------------
    def square_condition(self, s: EndoSquare) -> bool:
        """The compatibility pasting equation required of a square
        between endomorphism maps, modulo coherence."""
        b = self.base
        lhs = paste(b, CellPath([[s.top.phi], [s.left.square, s.alpha]]))
        rhs = paste(b, CellPath([[s.alpha, s.right.square], [s.bottom.phi]]))
        return squares_equal_mod_coherence(b, lhs, rhs)

    def square(self, top, bottom, left, right, alpha) -> EndoSquare:
        s = EndoSquare(top, bottom, left, right, alpha)
        if not self.square_condition(s):
            raise BoundaryError("square violates the endomorphism compatibility")
        return s


class MndInstance(EndInstance):
    """The double category of monads: same cells as End, but the objects
    carry monad structure and the maps are required to satisfy the monad
    map laws (checked by the predicates below, typically from the law
    suites rather than eagerly)."""

    def __init__(self, base: DoubleCategory):
        super().__init__(base)
        self.name = f"mnd({base.name})"

    def forget(self, cell):
        """The forgetful functor to End: strips the monad structure."""
        if isinstance(cell, MonadObj):
            return as_endo(cell)
        if isinstance(cell, HorEndoMap):
            return HorEndoMap(as_endo(cell.dom), as_endo(cell.cod), cell.f, cell.phi)
        if isinstance(cell, VertEndoMap):
            return VertEndoMap(as_endo(cell.dom), as_endo(cell.cod), cell.u, cell.square)
        if isinstance(cell, EndoSquare):
            return EndoSquare(
                self.forget(cell.top),
                self.forget(cell.bottom),
                self.forget(cell.left),
                self.forget(cell.right),
                cell.alpha,
            )
        return cell


# ---------------------------------------------------------------------------
# The monad laws and the monad-map laws


def monad_laws_ok(c: DoubleCategory, m: HorMonad) -> Optional[str]:
    """None if the three monad laws hold; otherwise the failing law."""
    p, mu, eta = m.arrow, m.mult, m.unit
    vid_p = c.sq_vid(p)
    lhs = c.sq_vcomp(mu, c.sq_hcomp(vid_p, mu))
    rhs = c.sq_vcomp(mu, c.sq_hcomp(mu, vid_p))
    if not squares_equal_mod_coherence(c, lhs, rhs):
        return "associativity"
    unit_r = c.sq_vcomp(mu, c.sq_hcomp(vid_p, eta))
    if not squares_equal_mod_coherence(c, unit_r, c.runitor(p).fwd):
        return "right unit"
    unit_l = c.sq_vcomp(mu, c.sq_hcomp(eta, vid_p))
    if not squares_equal_mod_coherence(c, unit_l, c.lunitor(p).fwd):
        return "left unit"
    return None


def hor_monad_map_ok(
    c: DoubleCategory, dom: HorMonad, cod: HorMonad, h: HorEndoMap
) -> Optional[str]:
    """The two laws for a horizontal map between monads; h.phi is a
    square H(cod.arrow, h.f) -> H(h.f, dom.arrow)."""
    f, phi = h.f, h.phi
    p, q = dom.arrow, cod.arrow
    vf, vp, vq = c.sq_vid(f), c.sq_vid(p), c.sq_vid(q)
    lhs = paste(c, CellPath([[vf, cod.mult], [phi]]))
    rhs = paste(
        c,
        CellPath([
            [phi, vq],
            [vp, phi],
            [dom.mult, vf],
        ]),
    )
    if not squares_equal_mod_coherence(c, lhs, rhs):
        return "multiplication"
    lhs_u = paste(c, CellPath([[vf, cod.unit], [phi]]))
    rhs_u = c.sq_hcomp(vf, dom.unit)
    if not squares_equal_mod_coherence(c, lhs_u, rhs_u):
        return "unit"
    return None


def vert_monad_map_ok(
    c: DoubleCategory, dom: HorMonad, cod: HorMonad, m: VertEndoMap
) -> Optional[str]:
    """The two laws for a vertical map between monads."""
    ub = m.square
    lhs = c.sq_vcomp(ub, dom.mult)
    rhs = c.sq_vcomp(cod.mult, c.sq_hcomp(ub, ub))
    if not squares_equal_mod_coherence(c, lhs, rhs):
        return "multiplication"
    lhs_u = c.sq_vcomp(ub, dom.unit)
    rhs_u = c.sq_vcomp(cod.unit, c.sq_hid(m.u))
    if not squares_equal_mod_coherence(c, lhs_u, rhs_u):
        return "unit"
    return None


# ---------------------------------------------------------------------------
# Base change along a vertical arrow (needs framing)


def base_change_endo(c: DoubleCategory, u, target) -> tuple[Endomorphism, VertEndoMap]:
    """Pull an endomorphism on the target of u back along u.

    The new endo-arrow is conjoint(u) . P' . companion(u); the returned
    vertical map is the cartesian lift."""
    if not c.has_framed:
        raise CapabilityError(f"{c.name}: base change needs companions/conjoints")
    target = as_endo(target)
    fr = c.framed(u)
    p1 = target.arrow
    p = c.hcomp(fr.conjoint, c.hcomp(p1, fr.companion))
    x = c.vsrc(u)
    lift = paste(c, CellPath([[fr.alpha, c.sq_vid(p1), fr.beta]]))
    lift = retarget(c, lift, p, p1)
    e = Endomorphism(x, p)
    return e, VertEndoMap(e, target, u, lift)


def base_change_monad(c: DoubleCategory, u, target: MonadObj) -> tuple[MonadObj, VertEndoMap]:
    """Base change of a monad: the endo base change, with multiplication
    given by the counit of the companion/conjoint adjunction and unit
    given by its unit."""
    e, lift = base_change_endo(c, u, target)
    fr = c.framed(u)
    p, p1 = e.arrow, target.arrow
    eps = dc.epsilon_square(c, fr)
    eta_u = dc.eta_square(c, fr)
    vc, vj, vp1 = c.sq_vid(fr.companion), c.sq_vid(fr.conjoint), c.sq_vid(p1)
    mu = paste(
        c,
        CellPath([
            [vc, vp1, eps, vp1, vj],
            [vc, target.mult, vj],
        ]),
    )
    mu = retarget(c, mu, c.hcomp(p, p), p)
    eta = paste(c, CellPath([[eta_u], [vc, target.unit, vj]]))
    eta = retarget(c, eta, c.hid(c.vsrc(u)), p)
    m = MonadObj(e.obj, p, mu, eta)
    return m, VertEndoMap(as_endo(m), as_endo(target), u, lift.square)


def cartesian_factor_unique(c: DoubleCategory, lift: VertEndoMap, source, w) -> bool:
    """One instance of the universal property of a base-change lift:
    every square from `source` to the target over vcomp(u, w) factors as
    lift . h for exactly one square h over w."""
    p, p1 = lift.dom.arrow, lift.cod.arrow
    uw = c.vcomp(lift.u, w)
    for g in c.enumerate_squares(source, p1, uw, uw):
        mids = [
            h
            for h in c.enumerate_squares(source, p, w, w)
            if c.sq_eq(c.sq_vcomp(lift.square, h), g)
        ]
        if len(mids) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Cofolding: vertical endomorphism maps <-> horizontal maps out of a conjoint


def cofold(c: DoubleCategory, m: VertEndoMap) -> HorEndoMap:
    """Turn a vertical endomorphism map over u into a horizontal map
    whose arrow component is the conjoint of u."""
    if not c.has_framed:
        raise CapabilityError(f"{c.name}: cofolding needs companions/conjoints")
    fr = c.framed(m.u)
    p, p1 = m.dom.arrow, m.cod.arrow
    phi = paste(c, CellPath([[fr.beta, m.square, fr.gamma]]))
    phi = retarget(c, phi, c.hcomp(p, fr.conjoint), c.hcomp(fr.conjoint, p1))
    return HorEndoMap(m.cod, m.dom, fr.conjoint, phi)


def uncofold(c: DoubleCategory, h: HorEndoMap) -> VertEndoMap:
    """Inverse of cofold: recover the vertical map from a horizontal map
    out of a conjoint."""
    u = c.recognize_conjoint(h.f)
    if u is None:
        raise BoundaryError("horizontal component is not a conjoint")
    fr = c.framed(u)
    if fr.conjoint != h.f:
        raise BoundaryError("horizontal component is not the canonical conjoint")
    p, p1 = h.cod.arrow, h.dom.arrow
    sq = paste(
        c,
        CellPath([
            [fr.gamma, c.sq_vid(p)],
            [h.phi],
            [c.sq_vid(p1), fr.beta],
        ]),
    )
    sq = retarget(c, sq, p, p1)
    return VertEndoMap(h.cod, h.dom, u, sq)


# ---------------------------------------------------------------------------
# Free monads: the adjunction data


def nu_square(c: DoubleCategory, free: FreeMonadInH):
    """The square H(P, P*) -> P* that evaluates one layer of generators
    on top of the free monad: iota pasted with the multiplication."""
    return c.sq_vcomp(free.mult, c.sq_hcomp(free.iota, c.sq_vid(free.star)))


@dataclass(frozen=True)
class FreeMonadBundle:
    """The free monad on an endomorphism with its universal maps."""

    base: DoubleCategory = field(compare=False)
    endo: Endomorphism
    free: FreeMonadInH
    monad: MonadObj
    unit_map: VertEndoMap  # (1_X, iota): (X, P) -> (X, P*)
    nu: Any

    def vertical_sharp(self, target: MonadObj, m: VertEndoMap) -> VertEndoMap:
        """The unique vertical monad map (X, P*) -> target factoring a
        vertical endomorphism map through the unit: conjugate by the
        cofolding bijection around the horizontal sharp lift."""
        c = self.base
        h = cofold(c, m)
        sharp = c.free_sharp(self.free, target.hor(), h.f, h.phi)
        hstar = HorEndoMap(h.dom, as_endo(self.monad), h.f, sharp)
        out = uncofold(c, hstar)
        return VertEndoMap(as_endo(self.monad), m.cod, out.u, out.square)

    def hor_star(self, h: HorEndoMap, cod_bundle: "FreeMonadBundle") -> HorEndoMap:
        """Extend a horizontal endomorphism map to the free monads: the
        unique monad map (F, phi*) restricting to phi along the units."""
        c = self.base
        phi_tilde = c.sq_vcomp(c.sq_hcomp(c.sq_vid(h.f), self.free.iota), h.phi)
        star = c.free_sharp(cod_bundle.free, self.monad.hor(), h.f, phi_tilde)
        return HorEndoMap(self.monad, cod_bundle.monad, h.f, star)

    def iota_square(self, h: HorEndoMap, cod_bundle: "FreeMonadBundle") -> EndoSquare:
        """The universal square over a horizontal map: the identity
        square on its arrow, bounded by the two units."""
        return EndoSquare(
            h,
            self.hor_star(h, cod_bundle),
            self.unit_map,
            cod_bundle.unit_map,
            self.base.sq_vid(h.f),
        )

    def general_sharp(
        self, cod_bundle: "FreeMonadBundle", s: EndoSquare
    ) -> EndoSquare:
        """Sharp of an endomorphism square into monads: the underlying
        square is unchanged; the boundary maps are starred/sharped."""
        bot_dom, bot_cod = s.bottom.dom, s.bottom.cod
        return EndoSquare(
            self.hor_star(s.top, cod_bundle),
            s.bottom,
            self.vertical_sharp(_monad_of(bot_dom), s.left),
            cod_bundle.vertical_sharp(_monad_of(bot_cod), s.right),
            s.alpha,
        )


def _monad_of(x) -> MonadObj:
    if isinstance(x, MonadObj):
        return x
    raise BoundaryError("expected a monad on the bottom boundary")


def free_monad_adjunction(c: DoubleCategory, e: Endomorphism, bound=None) -> FreeMonadBundle:
    for cap, what in (
        (c.has_framed, "companions/conjoints"),
        (c.has_local_coproducts, "local coproducts"),
        (c.has_equalizers, "equalizers of squares"),
        (c.has_free_monads, "free monads on endo-arrows"),
    ):
        if not cap:
            raise CapabilityError(f"{c.name}: free monad assembly needs {what}")
    free = c.free_monad(e.arrow, bound) if bound else c.free_monad(e.arrow)
    if not free.exact:
        raise BoundaryError("free monad is truncated at this bound; refusing")
    m = MonadObj(e.obj, free.star, free.mult, free.unit)
    unit_map = VertEndoMap(e, as_endo(m), c.vid(e.obj), free.iota)
    return FreeMonadBundle(c, e, free, m, unit_map, nu_square(c, free))


# ---------------------------------------------------------------------------
# The equalizer witness for the compatibility of sharp squares


@dataclass(frozen=True)
class EqualizerWitness:
    arrow: Any  # E
    theta: Any  # E -> Q* F
    lam: Any  # F -> E
    rho: Any  # Q E -> E
    theta_inv: Any  # Q* F -> E, or None if no inverse was found
    left_paste: Any
    right_paste: Any
    diag1_ok: bool
    diag2_ok: bool


def equalizer_witness(
    c: DoubleCategory,
    sharped: EndoSquare,
    q_bundle: FreeMonadBundle,
) -> EqualizerWitness:
    """The sub-arrow of Q*F on which the two sharp pastings agree,
    together with its algebra structure (lambda, rho) and an explicit
    inverse for the inclusion when one exists."""
    b_f = sharped.top.f
    phi_star = sharped.top.phi
    phi1 = sharped.bottom.phi
    left = paste(c, CellPath([[phi_star], [sharped.left.square, sharped.alpha]]))
    right = paste(c, CellPath([[sharped.alpha, sharped.right.square], [phi1]]))
    if c.sq_top(left) != c.sq_top(right) or c.sq_bottom(left) != c.sq_bottom(right):
        raise BoundaryError("sharp pastings are not parallel; upstream law failure")
    eq = c.equalizer1(left, right)
    e_arrow, theta = eq.arrow, eq.include

    q = q_bundle.endo.arrow
    qstar_f = c.sq_top(left)

    lam_cand = c.sq_hcomp(q_bundle.free.unit, c.sq_vid(b_f))
    lam_cand = retarget(c, lam_cand, b_f, qstar_f)
    diag1 = c.sq_eq(c.sq_vcomp(left, lam_cand), c.sq_vcomp(right, lam_cand))
    lam = eq.mediate(lam_cand) if diag1 else None

    q_theta = c.sq_hcomp(c.sq_vid(q), theta)
    nu_f = c.sq_hcomp(q_bundle.nu, c.sq_vid(b_f))
    nu_f = retarget(c, nu_f, c.sq_bottom(q_theta), qstar_f)
    rho_cand = c.sq_vcomp(nu_f, q_theta)
    diag2 = c.sq_eq(c.sq_vcomp(left, rho_cand), c.sq_vcomp(right, rho_cand))
    rho = eq.mediate(rho_cand) if diag2 else None

    theta_inv = None
    u_id = c.vid(c.hsrc(e_arrow))
    v_id = c.vid(c.htgt(e_arrow))
    for cand in c.enumerate_squares(qstar_f, e_arrow, u_id, v_id):
        if c.sq_eq(c.sq_vcomp(cand, theta), c.sq_vid(e_arrow)) and c.sq_eq(
            c.sq_vcomp(theta, cand), c.sq_vid(qstar_f)
        ):
            theta_inv = cand
            break
    return EqualizerWitness(e_arrow, theta, lam, rho, theta_inv, left, right, diag1, diag2)


# ---------------------------------------------------------------------------
# The displayed equations of the compatibility proof, as concrete pairs


def pipeline_equations(
    c: DoubleCategory,
    p_bundle: FreeMonadBundle,
    q_bundle: FreeMonadBundle,
    s: EndoSquare,
    sharped: EndoSquare,
    witness: EqualizerWitness,
) -> dict:
    """Both sides of each displayed equation in the compatibility
    argument, evaluated on concrete cells.  Keys are short equation
    names; values are (lhs, rhs) pairs of squares to be compared modulo
    coherence."""
    b_f = s.top.f
    phi, phi1 = s.top.phi, s.bottom.phi
    phi_star = sharped.top.phi
    a = s.alpha
    ubar, vbar = s.left.square, s.right.square
    ubar_s, vbar_s = sharped.left.square, sharped.right.square
    p_monad = _monad_of(s.bottom.dom)
    q_star = q_bundle.free
    vf = c.sq_vid(b_f)
    vq = c.sq_vid(q_bundle.endo.arrow)
    theta = witness.theta

    eqs = {}
    eqs["transposefirst"] = (
        paste(c, CellPath([[p_bundle.free.unit], [ubar_s]])),
        paste(c, CellPath([[c.sq_hid(s.left.u)], [p_monad.unit]])),
    )
    eqs["transposesecond"] = (
        paste(c, CellPath([[p_bundle.nu], [ubar_s]])),
        paste(c, CellPath([[ubar_s, ubar], [p_monad.mult]])),
    )
    eqs["phistarfirst"] = (
        paste(c, CellPath([[vf, q_star.unit], [phi_star]])),
        c.sq_hcomp(vf, p_bundle.free.unit),
    )
    eqs["phistarsecond"] = (
        paste(c, CellPath([[vf, q_bundle.nu], [phi_star]])),
        paste(
            c,
            CellPath([
                [phi_star, vq],
                [c.sq_vid(p_bundle.free.star), phi],
                [vf, p_bundle.nu],
            ]),
        ),
    )
    eqs["unitaxiom"] = (a, c.sq_vcomp(sharped.alpha, c.sq_vid(b_f)))
    eqs["hypothesisalpha"] = (
        paste(c, CellPath([[phi], [ubar, a]])),
        paste(c, CellPath([[a, vbar], [phi1]])),
    )
    eqs["Id"] = (
        paste(c, CellPath([[vf, q_star.unit], [phi_star], [ubar_s, a]])),
        paste(c, CellPath([[vf, q_star.unit], [a, vbar_s], [phi1]])),
    )
    eqs["indhyp"] = (
        paste(c, CellPath([[theta], [phi_star], [ubar_s, a]])),
        paste(c, CellPath([[theta], [a, vbar_s], [phi1]])),
    )
    eqs["Q+"] = (
        paste(
            c,
            CellPath([
                [theta, vq],
                [vf, q_bundle.nu],
                [phi_star],
                [ubar_s, a],
            ]),
        ),
        paste(
            c,
            CellPath([
                [theta, vq],
                [vf, q_bundle.nu],
                [a, vbar_s],
                [phi1],
            ]),
        ),
    )
    eqs["compatibilityfinal"] = (witness.left_paste, witness.right_paste)
    return eqs


def identity_scenario(
    c: DoubleCategory, e: Endomorphism, target: MonadObj, m: VertEndoMap
) -> EndoSquare:
    """The simplest nondegenerate instance of the compatibility setup:
    both horizontal maps are identities, and the square over a vertical
    endomorphism map into a monad is the horizontal identity on its
    vertical arrow."""
    end = EndInstance(c)
    top = end.hid(e)
    bottom = end.hid(target)
    left = VertEndoMap(e, target, m.u, m.square)
    return EndoSquare(top, bottom, left, left, c.sq_hid(m.u))
