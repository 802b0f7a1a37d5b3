"""The double/triple sine layer: F and G with their integral representations,
product expansions, moment integrals, exponential prefactors and asymptotics.

F(z | w1bar, w2) is the double sine with the exp(-pi i/2 B_{2,2}) prefactor
absorbed, G(z | w1, w1t, w2) the triple sine (arguments shifted by w1bar) with
the exp(pi i/6 B_{3,3}) prefactor absorbed; both then admit plain contour
integral representations

    log F = int_C e^(zs) / ((e^(w1bar s)-1)(e^(w2 s)-1)) ds/s,
    log G = int_C -e^((z+w1bar) s) / ((e^(w1 s)-1)(e^(w1t s)-1)(e^(w2 s)-1)) ds/s,

over the real line with an upper semicircle at the origin, rotated into the
admissible wedge.  The starred functions F*, G* multiply in Laurent-in-w2
prefactors Q_F, Q_G built from the k = 0, 1 moment integrals so that both
tend to 1 as w2 -> 0 and grow at most polynomially as w2 -> infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bernoulli import bernoulli_numbers, multiple_bernoulli, zeta_int
from .checks import Predicate, Residual, im_ratio, im_ratio_predicate
from .contour import (ContourSpec, QuadratureError, RotationError,
                      choose_outer_cutoff, detour_integral, hull_rotation)
from .lattice import RegionError

TWO_PI_I = 2j * math.pi

#: fraction of the distance to the nearest integrand pole used for the
#: origin semicircle; large enough that the principal-part cancellation
#: between the two half-lines stays benign in double precision
EPS_POLE_FRACTION = 0.45

#: candidate tilts for the moment-integral rotation c = e^(-i(theta+eps_plus));
#: the value is deformation-invariant in the admissible window, so the tilt is
#: chosen to balance the decay rates at the two contour ends (the nominal
#: 1e-3 tilt makes the -infinity tail ~ 1/sin(1e-3) long and is kept only as
#: an explicit override)
EPS_PLUS_GRID = (0.35, 0.25, 0.18, 0.12, 0.08, 0.05, 0.03, 0.02, 0.012,
                 0.008, 0.005, 0.003, 0.002, 0.0015, 0.001)


class PoleZeroError(ArithmeticError):
    """Evaluation lands on (or too near) a lattice zero/pole."""


@dataclass(frozen=True)
class OmegaTriple:
    """Parameter pack (w1, w1t, w2) with the derived combinations."""

    w1: complex
    w1t: complex
    w2: complex

    @property
    def obar(self) -> complex:
        return (self.w1 + self.w1t) / 2

    @property
    def dw(self) -> complex:
        return (self.w1 - self.w1t) / 2

    def same_side_margin(self) -> float:
        """pi minus the angular hull of (w1, w1t, w2); positive iff the three
        parameters lie strictly on one side of a line through the origin."""
        try:
            _, margin = hull_rotation([self.w1, self.w1t, self.w2])
        except RotationError:
            return -1.0
        return 2 * margin


@dataclass(frozen=True)
class ExpVars:
    """The bookkeeping exponentials; always recomputed from the parameters."""

    x1: complex
    x2: complex
    q1: complex
    q2: complex
    q2t: complex

    @classmethod
    def from_params(cls, z: complex, w1: complex, w1t: complex, w2: complex) -> "ExpVars":
        obar = (w1 + w1t) / 2
        return cls(
            x1=cmath.exp(TWO_PI_I * z / obar),
            x2=cmath.exp(TWO_PI_I * z / w2),
            q1=cmath.exp(TWO_PI_I * w2 / obar),
            q2=cmath.exp(TWO_PI_I * w1 / w2),
            q2t=cmath.exp(TWO_PI_I * w1t / w2),
        )


# ---------------------------------------------------------------------------
# overflow-safe integrand pieces


def _exp_over_prod(zeff: complex, omegas: tuple, s: complex) -> complex:
    """e^(zeff s) / prod_i (e^(w_i s) - 1), overflow-safe.

    Factors with Re(w s) > 0 are rewritten 1/(e^a - 1) = e^(-a)/(1 - e^(-a))
    and the e^(-a) pulled into the numerator exponent, so nothing overflows
    along either half-line.
    """
    shift = 0j
    den = 1 + 0j
    for w in omegas:
        a = w * s
        if a.real > 0:
            den *= 1 - cmath.exp(-a)
            shift += a
        else:
            den *= cmath.exp(a) - 1
    return cmath.exp(zeff * s - shift) / den


def _auto_eps(omegas: tuple, explicit: float | None) -> float:
    if explicit is not None:
        return explicit
    return EPS_POLE_FRACTION * 2 * math.pi / max(abs(w) for w in omegas)


def _strip_rotation(directions: list[complex], names: list[str],
                    spec: ContourSpec) -> complex:
    if spec.rotation is None:
        c, _ = hull_rotation(directions, names)
        return c
    c = spec.rotation
    failed = [nm for d, nm in zip(directions, names) if (c * d).real <= 0]
    if failed:
        raise RegionError("supplied rotation violates: " + ", ".join(failed), failed)
    return c


def log_F_contour(z: complex, w1bar: complex, w2: complex,
                  spec: ContourSpec | None = None) -> tuple[complex, float]:
    """log F(z | w1bar, w2) by rotated-contour quadrature.

    Valid when a rotation c exists with Re(c w1bar) > 0, Re(c w2) > 0 and
    0 < Re(c z) < Re(c (w1bar + w2)); the rotation is chosen automatically
    unless supplied.
    """
    spec = spec or ContourSpec()
    dirs = [w1bar, w2, z, w1bar + w2 - z]
    names = ["Re(c*w1bar)>0", "Re(c*w2)>0", "Re(c*z)>0", "Re(c*(w1bar+w2-z))>0"]
    c = _strip_rotation(dirs, names, spec)

    def f(s: complex) -> complex:
        return _exp_over_prod(z, (w1bar, w2), s) / s

    eps = _auto_eps((w1bar, w2), spec.eps)
    R = spec.R if spec.R is not None else choose_outer_cutoff(f, c, eps, spec.tol)
    return detour_integral(f, eps, R, c, spec.tol, spec.max_panels)


def log_G_contour(z: complex, w1: complex, w1t: complex, w2: complex,
                  spec: ContourSpec | None = None) -> tuple[complex, float]:
    """log G(z | w1, w1t, w2) by rotated-contour quadrature.

    Valid when a rotation c exists making all of (w1, w1t, w2) and the strip
    directions z + w1bar, w1bar + w2 - z lie in the right half-plane.
    """
    spec = spec or ContourSpec()
    obar = (w1 + w1t) / 2
    dirs = [w1, w1t, w2, z + obar, obar + w2 - z]
    names = ["Re(c*w1)>0", "Re(c*w1t)>0", "Re(c*w2)>0",
             "Re(c*(z+w1bar))>0", "Re(c*(w1bar+w2-z))>0"]
    c = _strip_rotation(dirs, names, spec)

    def f(s: complex) -> complex:
        return -_exp_over_prod(z + obar, (w1, w1t, w2), s) / s

    eps = _auto_eps((w1, w1t, w2), spec.eps)
    R = spec.R if spec.R is not None else choose_outer_cutoff(f, c, eps, spec.tol)
    return detour_integral(f, eps, R, c, spec.tol, spec.max_panels)


_logG_cache: dict = {}


def log_G_cached(z: complex, w1: complex, w1t: complex, w2: complex,
                 tol: float = 3e-11) -> tuple[complex, float]:
    key = (z, w1, w1t, w2, tol)
    if key not in _logG_cache:
        _logG_cache[key] = log_G_contour(z, w1, w1t, w2, ContourSpec(tol=tol))
    return _logG_cache[key]


def clear_caches() -> None:
    _logG_cache.clear()
    _moment_cache.clear()


# ---------------------------------------------------------------------------
# numeric quantum dilogarithm


def qdilog_numeric(x: complex, q: complex, tol: float = 1e-12,
                   max_terms: int = 200000) -> complex:
    """E_q(x) = prod_{k>=0} (1 - x q^k) for |q| < 1.

    Truncated once the log-tail bound sum_{k>K} 2 |x| |q|^k / ... < tol
    (using |log(1-u)| <= 2|u| for |u| <= 1/2); factors within tol of zero are
    flagged as a zero of the product rather than silently multiplied.
    """
    if abs(q) >= 1:
        raise RegionError(f"qdilog_numeric requires |q| < 1, got {abs(q):.6f}",
                          ["|q| < 1"])
    out = 1 + 0j
    u = complex(x)
    aq = abs(q)
    k = 0
    while k < max_terms:
        if abs(u) <= 0.5 and 2 * abs(u) / (1 - aq) < tol:
            break
        _check_factor(u, "qdilog_numeric", tol)
        out *= 1 - u
        u *= q
        k += 1
    return out


# ---------------------------------------------------------------------------
# product expansion of F


def _check_factor(u: complex, where: str, tol: float) -> None:
    if abs(1 - u) < 1e3 * tol:
        raise PoleZeroError(f"near-vanishing factor in {where}: |1-u| = {abs(1 - u):.3e}")


def F_product(z: complex, w1bar: complex, w2: complex, tol: float = 1e-12,
              max_terms: int = 100000) -> complex:
    """Product expansion of F, convergent for Im(w1bar/w2) > 0:

    F = prod_{k>=1} (1 - x1 q1^(-k))^(-1) * prod_{k>=0} (1 - x2 p^k),
    p = (q2 q2t)^(1/2) = exp(2 pi i w1bar / w2).
    """
    r = im_ratio(w1bar, w2)
    if r <= 0:
        raise RegionError(f"product expansion requires Im(w1bar/w2) > 0 (got {r:.3e})",
                          ["Im(w1bar/w2) > 0"])
    x1 = cmath.exp(TWO_PI_I * z / w1bar)
    q1inv = cmath.exp(-TWO_PI_I * w2 / w1bar)
    x2 = cmath.exp(TWO_PI_I * z / w2)
    p = cmath.exp(TWO_PI_I * w1bar / w2)

    out = 1 + 0j
    # prod over k >= 1 of (1 - x1 q1^-k)^-1
    u = x1 * q1inv
    aq = abs(q1inv)
    k = 0
    while k < max_terms:
        # remaining tail bound: 2 sum |u| |q|^j <= 2|u|/(1-|q|), valid once |u| <= 1/2
        if abs(u) <= 0.5 and 2 * abs(u) / (1 - aq) < tol:
            break
        _check_factor(u, "F product (x1 family)", tol)
        out /= 1 - u
        u *= q1inv
        k += 1
    u = x2
    ap = abs(p)
    k = 0
    while k < max_terms:
        if abs(u) <= 0.5 and 2 * abs(u) / (1 - ap) < tol:
            break
        _check_factor(u, "F product (x2 family)", tol)
        out *= 1 - u
        u *= p
        k += 1
    return out


def F_value(z: complex, w1bar: complex, w2: complex, tol: float = 1e-12) -> complex:
    """F by product expansion when available (either parameter ordering: the
    contour representation is symmetric in (w1bar, w2)), else by contour."""
    if im_ratio(w1bar, w2) > 1e-14:
        return F_product(z, w1bar, w2, tol)
    if im_ratio(w2, w1bar) > 1e-14:
        return F_product(z, w2, w1bar, tol)
    val, _ = log_F_contour(z, w1bar, w2, ContourSpec(tol=max(1e-13, tol * 1e-2)))
    return cmath.exp(val)


# ---------------------------------------------------------------------------
# moment integrals f^c_(k-2), g^c_(k-2)


def _moment_rotation(zeff: complex, omegas: tuple,
                     eps_plus: float | None) -> complex:
    """c = e^(-i(theta + eps_plus)) with theta = arg(zeff) - pi/2.

    With eps_plus unset, the tilt is picked from a grid to maximise the
    weakest decay/clearance rate; the integral does not depend on the choice
    (no pole is crossed inside the admissible window).
    """
    theta = cmath.phase(zeff) - math.pi / 2
    wsum = sum(omegas)

    def rates(ep: float) -> float:
        c = cmath.exp(-1j * (theta + ep))
        m_minus = (zeff * c).real                      # decay at -infinity
        m_plus = ((wsum - zeff) * c).real              # decay at +infinity
        clear = min((w * c).real for w in omegas)      # pole clearance
        return min(m_minus, m_plus, clear)

    if eps_plus is not None:
        if rates(eps_plus) <= 0:
            raise QuadratureError(
                f"moment integrand does not decay for eps_plus={eps_plus}")
        return cmath.exp(-1j * (theta + eps_plus))
    best = max(EPS_PLUS_GRID, key=rates)
    if rates(best) <= 0:
        raise QuadratureError("decay failure at contour ends for every tilt; "
                              "moment conditions violated")
    return cmath.exp(-1j * (theta + best))


def f_moment_quad(order: int, z: complex, w1bar: complex,
                  spec: ContourSpec | None = None) -> tuple[complex, float]:
    """f^c_order(z, w1bar) = int_{cC} e^(zs) s^order / (e^(w1bar s) - 1) ds."""
    spec = spec or ContourSpec()
    if im_ratio(z, w1bar) <= 0:
        raise RegionError("f-moment requires Im(z/w1bar) > 0", ["Im(z/w1bar) > 0"])
    c = spec.rotation if spec.rotation is not None else \
        _moment_rotation(z, (w1bar,), spec.eps_plus)

    def f(s: complex) -> complex:
        return _exp_over_prod(z, (w1bar,), s) * s**order

    eps = _auto_eps((w1bar,), spec.eps)
    R = spec.R if spec.R is not None else choose_outer_cutoff(f, c, eps, spec.tol)
    return detour_integral(f, eps, R, c, spec.tol, spec.max_panels)


def g_moment_quad(order: int, z: complex, w1: complex, w1t: complex,
                  spec: ContourSpec | None = None) -> tuple[complex, float]:
    """g^c_order(z, w1, w1t) =
    int_{cC} -e^((z+w1bar)s) s^order / ((e^(w1 s)-1)(e^(w1t s)-1)) ds."""
    spec = spec or ContourSpec()
    failed = [nm for nm, num, den in (("Im(z/w1) > 0", z, w1), ("Im(z/w1t) > 0", z, w1t))
              if im_ratio(num, den) <= 0]
    if failed:
        raise RegionError("g-moment requires " + " and ".join(failed), failed)
    obar = (w1 + w1t) / 2
    c = spec.rotation if spec.rotation is not None else \
        _moment_rotation(z + obar, (w1, w1t), spec.eps_plus)

    def f(s: complex) -> complex:
        return -_exp_over_prod(z + obar, (w1, w1t), s) * s**order

    eps = _auto_eps((w1, w1t), spec.eps)
    R = spec.R if spec.R is not None else choose_outer_cutoff(f, c, eps, spec.tol)
    return detour_integral(f, eps, R, c, spec.tol, spec.max_panels)


def polylog(s: int, x: complex, tol: float = 1e-16) -> complex:
    """Li_s(x) for integer s <= 2; series for s in {1, 2}, closed forms below."""
    if abs(x) >= 1 and s >= 1:
        raise ValueError(f"polylog series requires |x| < 1, got {abs(x):.6f}")
    if s == 2:
        acc = 0j
        term = x
        m = 1
        while abs(term) / m**2 > tol * max(1.0, abs(acc)) or m < 4:
            acc += term / m**2
            m += 1
            term *= x
            if m > 100000:
                raise QuadratureError("polylog series did not converge")
        return acc
    if s == 1:
        return -cmath.log(1 - x)
    y = 1 - x
    if abs(y) < 1e-14:
        raise PoleZeroError("polylog pole at x = 1")
    if s == 0:
        return x / y
    if s == -1:
        return x / y**2
    if s == -2:
        return x * (1 + x) / y**3
    if s == -3:
        return x * (1 + 4 * x + x * x) / y**4
    if s == -4:
        return x * (1 + x) * (1 + 10 * x + x * x) / y**5
    raise ValueError(f"polylog order {s} not implemented")


def f_moment_series(order: int, z: complex, w1bar: complex) -> complex:
    """Residue-sum closed form: f^c_order = (2 pi i / w1bar)^(order+1) Li_(-order)(x1),
    x1 = exp(2 pi i z / w1bar); converges for Im(z/w1bar) > 0."""
    x1 = cmath.exp(TWO_PI_I * z / w1bar)
    if abs(x1) >= 1 - 1e-12:
        raise RegionError("residue series requires Im(z/w1bar) > 0 with margin",
                          ["Im(z/w1bar) > 0"])
    return (TWO_PI_I / w1bar) ** (order + 1) * polylog(-order, x1)


def _g_family(order: int, z: complex, a: complex, b: complex,
              tol: float = 1e-16) -> complex:
    """Sum of residues at the poles 2 pi i m / a, m >= 1, of the g integrand."""
    rho_h = cmath.exp(1j * math.pi * b / a)
    u = cmath.exp(TWO_PI_I * z / a)
    pref = (TWO_PI_I / a) ** order / a
    ar = abs(rho_h)
    if abs(ar - 1) < 1e-9:
        raise RegionError("coincident pole families (w1t/w1 real); use quadrature",
                          ["w1t/w1 not real"])
    acc = 0j
    if ar < 1:
        warg = -u * rho_h
        step = rho_h * rho_h
        sign = 1
    else:
        warg = -u / rho_h
        step = 1 / (rho_h * rho_h)
        sign = -1
    if abs(warg) >= 1 - 1e-12:
        raise RegionError(
            f"g-moment residue series diverges (|first argument| = {abs(warg):.6f})",
            ["|u rho^(+-1/2)| < 1"])
    # geometric decay rate |step| < 1; bail out to quadrature when the decay
    # is so slow that the sum would need an absurd number of terms
    niter = math.log(max(tol, 1e-300) / abs(warg)) / math.log(abs(step))
    if niter > 20000:
        raise RegionError("pole families nearly coincident; residue series "
                          "impractically slow", ["w1t/w1 not nearly real"])
    while abs(warg) > tol:
        acc += polylog(-order, warg)
        warg *= step
    return sign * pref * acc


def g_moment_series(order: int, z: complex, w1: complex, w1t: complex) -> complex:
    """Residue-sum closed form of the g moment (both pole families)."""
    return TWO_PI_I * (_g_family(order, z, w1, w1t) + _g_family(order, z, w1t, w1))


_moment_cache: dict = {}


def f_moment(order: int, z: complex, w1bar: complex, method: str = "auto",
             spec: ContourSpec | None = None) -> complex:
    """Moment integral with selectable route; "auto" prefers the residue series
    (exact resummation of the contour) and falls back to quadrature."""
    key = ("f", order, z, w1bar, method)
    if key in _moment_cache:
        return _moment_cache[key]
    if method == "quad":
        val = f_moment_quad(order, z, w1bar, spec)[0]
    elif method == "series":
        val = f_moment_series(order, z, w1bar)
    else:
        try:
            val = f_moment_series(order, z, w1bar)
        except (RegionError, PoleZeroError):
            val = f_moment_quad(order, z, w1bar, spec)[0]
    _moment_cache[key] = val
    return val


def g_moment(order: int, z: complex, w1: complex, w1t: complex,
             method: str = "auto", spec: ContourSpec | None = None) -> complex:
    key = ("g", order, z, w1, w1t, method)
    if key in _moment_cache:
        return _moment_cache[key]
    if method == "quad":
        val = g_moment_quad(order, z, w1, w1t, spec)[0]
    elif method == "series":
        val = g_moment_series(order, z, w1, w1t)
    else:
        try:
            val = g_moment_series(order, z, w1, w1t)
        except (RegionError, PoleZeroError):
            val = g_moment_quad(order, z, w1, w1t, spec)[0]
    _moment_cache[key] = val
    return val


def f_moment_residue_oracle(order: int, z: complex, w1bar: complex,
                            tol: float = 1e-14) -> complex:
    """Plain truncated residue sum 2 pi i sum_m e^(z s_m) s_m^order / w1bar,
    s_m = 2 pi i m / w1bar: the independent oracle for the quadrature route."""
    if order > -1:
        raise ValueError("direct residue sum only converges for order <= -1")
    x1 = cmath.exp(TWO_PI_I * z / w1bar)
    if abs(x1) >= 1:
        raise RegionError("residue sum requires Im(z/w1bar) > 0")
    acc = 0j
    m = 1
    term = x1
    while abs(term) > tol and m < 100000:
        acc += term * (TWO_PI_I * m / w1bar) ** order
        m += 1
        term *= x1
    return TWO_PI_I * acc / w1bar


# ---------------------------------------------------------------------------
# starred functions


def q_F(z: complex, w1bar: complex, w2: complex, method: str = "auto") -> complex:
    """Q_F = -f_(-2)/w2 + f_(-1)/2 + (pi i/12)(w2/w1bar)."""
    f2 = f_moment(-2, z, w1bar, method)
    f1 = f_moment(-1, z, w1bar, method)
    return -f2 / w2 + f1 / 2 + 1j * math.pi / 12 * w2 / w1bar


def F_star_predicates(z: complex, w1bar: complex) -> list[Predicate]:
    return [im_ratio_predicate("z/w1bar", z, w1bar)]


def log_F_star(z: complex, w1bar: complex, w2: complex, tol: float = 1e-12,
               method: str = "auto", enforce: bool = True) -> complex:
    preds = F_star_predicates(z, w1bar)
    bad = [p.name for p in preds if not p.ok]
    if bad and enforce:
        raise RegionError("F* undefined: " + ", ".join(bad), bad)
    return cmath.log(F_value(z, w1bar, w2, tol)) + q_F(z, w1bar, w2, method)


def F_star(z: complex, w1bar: complex, w2: complex, tol: float = 1e-12,
           method: str = "auto") -> complex:
    return cmath.exp(log_F_star(z, w1bar, w2, tol, method))


def q_G(z: complex, w1: complex, w1t: complex, w2: complex,
        method: str = "auto") -> complex:
    """Q_G = -(g_(-2)(z) - g_(-2)(dw))/w2 + (g_(-1)(z) - g_(-1)(dw))/2
           + (B_{1,2}(z+obar) - B_{1,2}(w1)) zeta(2) w2 / (2 pi i),
    with dw = (w1 - w1t)/2 and the B_{1,2} taken at parameters (w1, w1t)."""
    dw = (w1 - w1t) / 2
    obar = (w1 + w1t) / 2
    g2 = g_moment(-2, z, w1, w1t, method) - g_moment(-2, dw, w1, w1t, method)
    g1 = g_moment(-1, z, w1, w1t, method) - g_moment(-1, dw, w1, w1t, method)
    b12 = (multiple_bernoulli(1, 2, z + obar, [w1, w1t])
           - multiple_bernoulli(1, 2, w1, [w1, w1t]))
    return -g2 / w2 + g1 / 2 + b12 * zeta_int(2) * w2 / TWO_PI_I


def G_star_predicates(z: complex, w1: complex, w1t: complex) -> list[Predicate]:
    dw = (w1 - w1t) / 2
    return [
        im_ratio_predicate("z/w1", z, w1),
        im_ratio_predicate("z/w1t", z, w1t),
        im_ratio_predicate("dw/w1", dw, w1, kind="tau"),
        im_ratio_predicate("dw/w1t", dw, w1t, kind="tau"),
    ]


def log_G_star(z: complex, w1: complex, w1t: complex, w2: complex,
               tol: float = 3e-11, method: str = "auto",
               enforce: bool = True) -> complex:
    preds = G_star_predicates(z, w1, w1t)
    bad = [p.name for p in preds if not p.ok]
    if bad and enforce:
        raise RegionError("G* undefined: " + ", ".join(bad), bad)
    dw = (w1 - w1t) / 2
    lg_z, _ = log_G_cached(z, w1, w1t, w2, tol)
    lg_dw, _ = log_G_cached(dw, w1, w1t, w2, tol)
    return lg_z - lg_dw + q_G(z, w1, w1t, w2, method)


def G_star(z: complex, w1: complex, w1t: complex, w2: complex,
           tol: float = 3e-11, method: str = "auto") -> complex:
    return cmath.exp(log_G_star(z, w1, w1t, w2, tol, method))


# ---------------------------------------------------------------------------
# reflection right-hand sides


def reflection_rhs_F(z: complex, w1: complex, w1t: complex, w2: complex,
                     tol: float = 1e-12) -> complex:
    """prod_{k>=0}(1 - x2 p^k) prod_{k>=1}(1 - x2^(-1) p^k)^(-1),
    p = (q2 q2t)^(1/2); requires Im(w1/w2) > 0 and Im(w1t/w2) > 0."""
    failed = [nm for nm, num in (("Im(w1/w2) > 0", w1), ("Im(w1t/w2) > 0", w1t))
              if im_ratio(num, w2) <= 0]
    if failed:
        raise RegionError("reflection RHS (F): " + ", ".join(failed), failed)
    obar = (w1 + w1t) / 2
    x2 = cmath.exp(TWO_PI_I * z / w2)
    p = cmath.exp(TWO_PI_I * obar / w2)
    ap = abs(p)
    out = 1 + 0j
    u = x2
    while not (abs(u) <= 0.5 and 2 * abs(u) / (1 - ap) < tol):
        _check_factor(u, "reflection RHS F (x2 family)", tol)
        out *= 1 - u
        u *= p
    u = p / x2
    while not (abs(u) <= 0.5 and 2 * abs(u) / (1 - ap) < tol):
        _check_factor(u, "reflection RHS F (1/x2 family)", tol)
        out /= 1 - u
        u *= p
    return out


def reflection_rhs_G(z: complex, w1: complex, w1t: complex, w2: complex,
                     tol: float = 1e-12) -> complex:
    """prod_{k1,k2>=0} (1 - x2 q2^(k1+1/2) q2t^(k2+1/2))
                       (1 - x2^(-1) q2^(k1+1/2) q2t^(k2+1/2));
    requires Im(w1/w2) > 0 and Im(w1t/w2) > 0."""
    failed = [nm for nm, num in (("Im(w1/w2) > 0", w1), ("Im(w1t/w2) > 0", w1t))
              if im_ratio(num, w2) <= 0]
    if failed:
        raise RegionError("reflection RHS (G): " + ", ".join(failed), failed)
    x2 = cmath.exp(TWO_PI_I * z / w2)
    q2h = cmath.exp(1j * math.pi * w1 / w2)
    q2th = cmath.exp(1j * math.pi * w1t / w2)
    aq, aqt = abs(q2h) ** 2, abs(q2th) ** 2
    big = max(abs(x2), abs(1 / x2))
    out = 1 + 0j
    k1 = 0
    while True:
        row_lead = big * abs(q2h) ** (2 * k1 + 1) * abs(q2th)
        if row_lead <= 0.5 and 2 * row_lead / ((1 - aq) * (1 - aqt)) < tol:
            break
        k2 = 0
        while True:
            base = q2h ** (2 * k1 + 1) * q2th ** (2 * k2 + 1)
            lead = big * abs(base)
            if lead <= 0.5 and 2 * lead / (1 - aqt) < tol:
                break
            for u in (x2 * base, base / x2):
                _check_factor(u, "reflection RHS G", tol)
                out *= 1 - u
            k2 += 1
        k1 += 1
    return out


# ---------------------------------------------------------------------------
# residue lemma


def residue_lemma_check(w: complex, d: int, tol: float = 1e-10) -> Residual:
    """Quadrature of -int_C e^(ws) s^(1-d) / (e^(ws)-1)^2 ds against
    (d-1) zeta(d) / (2 pi i) * (w / 2 pi i)^(d-2);  d = 1 uses the factor 1."""
    if w.real <= 0:
        raise RegionError("residue lemma requires Re(w) > 0", ["Re(w) > 0"])
    c = cmath.exp(-0.5j * cmath.phase(w))

    def f(s: complex) -> complex:
        a = w * s
        if a.real > 0:
            e = cmath.exp(-a)
            return -e * s ** (1 - d) / (1 - e) ** 2
        e = cmath.exp(a)
        return -e * s ** (1 - d) / (e - 1) ** 2

    eps = _auto_eps((w,), None)
    R = choose_outer_cutoff(f, c, eps, tol)
    lhs, err = detour_integral(f, eps, R, c, tol)
    factor = 1.0 if d == 1 else (d - 1) * zeta_int(d)
    rhs = factor / TWO_PI_I * (w / TWO_PI_I) ** (d - 2)
    res = Residual.compare(f"residue_lemma(d={d})", lhs, rhs, 1e-8,
                           meta={"quad_err": err, "w": [w.real, w.imag]})
    return res


# ---------------------------------------------------------------------------
# asymptotic expansions


def logF_partial_sum(z: complex, w1bar: complex, K: int,
                     method: str = "auto"):
    """Callable w2 -> sum_{k=0..K} B_k w2^(k-1) f_(k-2)(z, w1bar) / k!."""
    nums = bernoulli_numbers(K)
    moms = [f_moment(k - 2, z, w1bar, method) for k in range(K + 1)]

    def S(w2: complex) -> complex:
        return sum(complex(nums[k]) * w2 ** (k - 1) * moms[k] / math.factorial(k)
                   for k in range(K + 1))

    return S


def logG_partial_sum(z: complex, w1: complex, w1t: complex, K: int,
                     method: str = "auto"):
    nums = bernoulli_numbers(K)
    moms = [g_moment(k - 2, z, w1, w1t, method) for k in range(K + 1)]

    def S(w2: complex) -> complex:
        return sum(complex(nums[k]) * w2 ** (k - 1) * moms[k] / math.factorial(k)
                   for k in range(K + 1))

    return S


def fit_loglog_slope(xs, ys) -> tuple[float, float]:
    """Least-squares slope of log|y| against log|x|, plus max fit deviation."""
    lx = np.log(np.abs(np.asarray(xs, dtype=complex)))
    ly = np.log(np.abs(np.asarray(ys, dtype=complex)))
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    return float(coef[0]), float(np.max(np.abs(resid)))


def asymptotic_order_small_w2(mode: str, z: complex, params: tuple, K: int,
                              w2_dir: complex, scale0: float = 0.4,
                              ratio: float = 0.5, npts: int = 7,
                              tol: float = 3e-11) -> dict:
    """Empirical order of |log X - S_K| as w2 -> 0 along w2_dir.

    The remainder after the K-th term scales like w2^K when B_(K+1) != 0 and
    like w2^(K+1) otherwise (odd Bernoulli numbers vanish), so the fitted
    log-log slope must be within 0.2 of an integer >= K.
    """
    if mode == "F":
        (w1bar,) = params
        S = logF_partial_sum(z, w1bar, K)

        def logX(w2):
            return log_F_contour(z, w1bar, w2, ContourSpec(tol=tol))[0]
    elif mode == "G":
        w1, w1t = params
        S = logG_partial_sum(z, w1, w1t, K)

        def logX(w2):
            return log_G_contour(z, w1, w1t, w2, ContourSpec(tol=tol))[0]
    else:
        raise ValueError("mode must be 'F' or 'G'")

    w2s = [w2_dir * scale0 * ratio**m for m in range(npts)]
    rem = [logX(w2) - S(w2) for w2 in w2s]
    slope, dev = fit_loglog_slope(w2s, rem)
    nearest = round(slope)
    passed = abs(slope - nearest) <= 0.2 and nearest >= K
    return {"slope": slope, "nearest_integer": nearest, "K": K,
            "passed": passed, "fit_deviation": dev,
            "remainders": [abs(r) for r in rem]}


def _complex_lstsq(basis_rows: list[list[complex]], values: list[complex]):
    A = np.asarray(basis_rows, dtype=complex)
    y = np.asarray(values, dtype=complex)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return coef


def asymptotic_infinity_fit(mode: str, z: complex, params: tuple,
                            w2_dir: complex, scale0: float = 16.0,
                            factor: float = 2.0, npts: int = 8,
                            tol: float = 1e-8) -> dict:
    """Fit the large-w2 growth of log F / log G and compare the leading
    coefficients with their closed forms.

    F:  log F ~ -(pi i/12)(w2/w1bar) + B_1(z/w1bar) log w2 + O(1)
    G:  log G ~ B_{0,2} zeta(3)/(4 pi^2) w2^2 - B_{1,2} zeta(2)/(2 pi i) w2
                - B_{2,2}/2 log w2 + O(1),
    the multiple Bernoulli polynomials taken at (z + w1bar | w1, w1t).
    """
    from .bernoulli import bernoulli_poly

    w2s = [w2_dir * scale0 * factor**m for m in range(npts)]
    lf = math.log(factor)
    # Fitting consecutive differences removes the unknown O(1) constant, which
    # otherwise limits how well the log coefficient can be resolved.
    if mode == "F":
        (w1bar,) = params
        vals = [log_F_contour(z, w1bar, w2, ContourSpec(tol=tol))[0] for w2 in w2s]
        diffs = [vals[j + 1] - vals[j] for j in range(npts - 1)]
        rows = [[w2 * (factor - 1), lf, (1 / factor - 1) / w2,
                 (1 / factor**2 - 1) / w2**2] for w2 in w2s[:-1]]
        coef = _complex_lstsq(rows, diffs)
        targets = {
            "linear": (-1j * math.pi / 12 / w1bar, coef[0]),
            "log": (complex(bernoulli_poly(1, z / w1bar)), coef[1]),
        }
    elif mode == "G":
        w1, w1t = params
        obar = (w1 + w1t) / 2
        vals = [log_G_contour(z, w1, w1t, w2, ContourSpec(tol=tol))[0] for w2 in w2s]
        diffs = [vals[j + 1] - vals[j] for j in range(npts - 1)]
        rows = [[w2 * w2 * (factor**2 - 1), w2 * (factor - 1), lf,
                 (1 / factor - 1) / w2, (1 / factor**2 - 1) / w2**2]
                for w2 in w2s[:-1]]
        coef = _complex_lstsq(rows, diffs)
        b02 = complex(multiple_bernoulli(0, 2, z + obar, [w1, w1t]))
        b12 = complex(multiple_bernoulli(1, 2, z + obar, [w1, w1t]))
        b22 = complex(multiple_bernoulli(2, 2, z + obar, [w1, w1t]))
        targets = {
            "quadratic": (b02 * zeta_int(3) / (4 * math.pi**2), coef[0]),
            "linear": (-b12 * zeta_int(2) / TWO_PI_I, coef[1]),
            "log": (-b22 / 2, coef[2]),
        }
    else:
        raise ValueError("mode must be 'F' or 'G'")

    out = {}
    for name, (closed, fitted) in targets.items():
        rel = abs(fitted - closed) / abs(closed)
        out[name] = {"closed": closed, "fitted": complex(fitted), "rel_err": rel}
    return out
