"""Charge lattice, central charge and BPS data for the resolved conifold.

The doubled lattice has basis (beta, delta, beta^, delta^) where the hatted
generators are the dual (magnetic) basis.  The skew form vanishes on the
electric and on the magnetic halves and pairs <beta^, beta> = <delta^, delta> = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .laurent import LaurentPoly

TWO_PI_I = 2j * math.pi

#: Default depth for the finite "v + n w != 0" scan in the M+ membership test.
MPLUS_SCAN_DEPTH = 64

#: Angular tolerance (radians) for deciding that a direction lies on a ray.
RAY_ANGLE_TOL = 1e-12

#: Directions closer than this (but farther than RAY_ANGLE_TOL) to an active
#: ray are reported as ambiguous instead of being silently snapped.
RAY_AMBIGUOUS_TOL = 1e-9


class RegionError(ValueError):
    """A point violates a named region predicate."""

    def __init__(self, message: str, failed: list[str] | None = None):
        super().__init__(message)
        self.failed = failed or []


@dataclass(frozen=True)
class ChargeVector:
    """Integer charge a*beta + b*delta + ma*beta^ + mb*delta^."""

    a: int = 0
    b: int = 0
    ma: int = 0
    mb: int = 0

    def __add__(self, other: "ChargeVector") -> "ChargeVector":
        return ChargeVector(self.a + other.a, self.b + other.b,
                            self.ma + other.ma, self.mb + other.mb)

    def __sub__(self, other: "ChargeVector") -> "ChargeVector":
        return ChargeVector(self.a - other.a, self.b - other.b,
                            self.ma - other.ma, self.mb - other.mb)

    def __neg__(self) -> "ChargeVector":
        return ChargeVector(-self.a, -self.b, -self.ma, -self.mb)

    def __mul__(self, k: int) -> "ChargeVector":
        return ChargeVector(k * self.a, k * self.b, k * self.ma, k * self.mb)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == self.b == self.ma == self.mb == 0

    def is_electric(self) -> bool:
        return self.ma == 0 and self.mb == 0

    def is_magnetic(self) -> bool:
        return self.a == 0 and self.b == 0

    def electric_part(self) -> "ChargeVector":
        return ChargeVector(self.a, self.b, 0, 0)

    def magnetic_part(self) -> "ChargeVector":
        return ChargeVector(0, 0, self.ma, self.mb)

    def max_norm(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.ma), abs(self.mb))

    def coords(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.ma, self.mb)


BETA = ChargeVector(1, 0, 0, 0)
DELTA = ChargeVector(0, 1, 0, 0)
BETA_V = ChargeVector(0, 0, 1, 0)
DELTA_V = ChargeVector(0, 0, 0, 1)

#: <e_i, e_j> on the ordered basis (beta, delta, beta^, delta^).
SKEW_MATRIX = (
    (0, 0, -1, 0),
    (0, 0, 0, -1),
    (1, 0, 0, 0),
    (0, 1, 0, 0),
)


def skew_pair(g1: ChargeVector, g2: ChargeVector) -> int:
    """Canonical skew form on the doubled lattice, <beta^, beta> = 1."""
    return (g1.ma * g2.a - g1.a * g2.ma) + (g1.mb * g2.b - g1.b * g2.mb)


def mplus_predicates(v: complex, w: complex,
                     scan_depth: int = MPLUS_SCAN_DEPTH) -> list[tuple[str, bool]]:
    """Named predicate checklist for membership in the region M+."""
    preds = [("w != 0", w != 0)]
    bad_n = None
    if w != 0:
        for n in range(-scan_depth, scan_depth + 1):
            if v + n * w == 0:
                bad_n = n
                break
    preds.append((f"v + n*w != 0 for |n| <= {scan_depth}", bad_n is None))
    im_ok = w != 0 and (v / w).imag > 0
    preds.append(("Im(v/w) > 0", im_ok))
    return preds


def in_mplus(v: complex, w: complex, scan_depth: int = MPLUS_SCAN_DEPTH) -> bool:
    return all(ok for _, ok in mplus_predicates(v, w, scan_depth))


def conifold_omega(gamma: ChargeVector) -> LaurentPoly:
    """Motivic invariant of the conifold, valued in Z[L^(1/2), L^(-1/2)].

    Extended by zero on the magnetic half of the doubled lattice.
    """
    if not gamma.is_electric():
        return LaurentPoly.zero()
    if abs(gamma.a) == 1:
        return LaurentPoly.one()
    if gamma.a == 0 and gamma.b != 0:
        return LaurentPoly({1: 1, -1: 1})
    return LaurentPoly.zero()


@dataclass(frozen=True)
class RefinedBPSStructure:
    """Lattice + central charge + invariant counts at a stability point."""

    v: complex
    w: complex
    skew: tuple = SKEW_MATRIX
    omega: Callable[[ChargeVector], LaurentPoly] = conifold_omega

    def central_charge(self, gamma: ChargeVector) -> complex:
        # extended by zero on the magnetic half
        return TWO_PI_I * (gamma.a * self.v + gamma.b * self.w)

    def support_constant(self, box: int = 8) -> float:
        """Empirical support constant: min |Z(g)| / ||g|| over a coordinate box.

        Only charges with nonzero invariant contribute.  The constant is
        reported, not asserted against any prescribed value.
        """
        best = math.inf
        for a in range(-box, box + 1):
            for b in range(-box, box + 1):
                g = ChargeVector(a, b)
                if g.is_zero() or self.omega(g).is_zero():
                    continue
                best = min(best, abs(self.central_charge(g)) / g.max_norm())
        return best


def conifold_bps(v: complex, w: complex,
                 scan_depth: int = MPLUS_SCAN_DEPTH) -> RefinedBPSStructure:
    """Conifold BPS structure at (v, w); rejects points outside M+."""
    failed = [name for name, ok in mplus_predicates(v, w, scan_depth) if not ok]
    if failed:
        raise RegionError(
            "stability point outside M+: failed " + "; ".join(failed), failed)
    return RefinedBPSStructure(v=v, w=w)


# ---------------------------------------------------------------------------
# Ray geometry


def _angle_diff(a: float, b: float) -> float:
    """Signed angular difference a - b reduced to (-pi, pi]."""
    d = (a - b) % (2 * math.pi)
    if d > math.pi:
        d -= 2 * math.pi
    return d


@dataclass(frozen=True)
class RayClassification:
    status: str                 # "active" | "ambiguous" | "sector"
    ray: str | None = None      # name of the matched / nearest active ray
    sector: str | None = None   # name of the containing sector
    bounds: tuple[str, str] | None = None  # (anticlockwise ray, clockwise ray)


@dataclass(frozen=True)
class RayGeometry:
    """Active rays ell_n = R>0 * 2 pi i (v + n w) and ell_inf = R>0 * 2 pi i w."""

    v: complex
    w: complex

    def __post_init__(self):
        if not in_mplus(self.v, self.w):
            raise RegionError("(v, w) outside M+")

    def ell_n_dir(self, n: int) -> complex:
        return TWO_PI_I * (self.v + n * self.w)

    def ell_inf_dir(self) -> complex:
        return TWO_PI_I * self.w

    def ray_charge(self, name: str) -> ChargeVector:
        """Primitive charge whose central charge spans the named ray."""
        if name == "ell_inf":
            return DELTA
        if name == "-ell_inf":
            return -DELTA
        sign = -1 if name.startswith("-") else 1
        n = int(name.split("(")[1].rstrip(")"))
        g = ChargeVector(1, n)
        return g if sign == 1 else -g

    def active_rays(self, nmax: int) -> list[tuple[str, float]]:
        rays = [("ell_inf", cmath.phase(self.ell_inf_dir())),
                ("-ell_inf", cmath.phase(-self.ell_inf_dir()))]
        for n in range(-nmax, nmax + 1):
            d = self.ell_n_dir(n)
            rays.append((f"ell({n})", cmath.phase(d)))
            rays.append((f"-ell({n})", cmath.phase(-d)))
        return rays

    def classify_ray(self, t: complex, nmax: int = 16,
                     angle_tol: float = RAY_ANGLE_TOL,
                     ambiguous_tol: float = RAY_AMBIGUOUS_TOL) -> RayClassification:
        """Classify the ray through t against the active rays, scanning |n| <= nmax.

        Directions within angle_tol of an active ray are active; within
        ambiguous_tol they are flagged ambiguous rather than resolved either way.
        """
        if t == 0:
            raise ValueError("t must be nonzero")
        phase = cmath.phase(t)
        rays = self.active_rays(nmax)
        name, dist = min(((nm, abs(_angle_diff(phase, ph))) for nm, ph in rays),
                         key=lambda item: item[1])
        if dist <= angle_tol:
            return RayClassification(status="active", ray=name)
        if dist <= ambiguous_tol:
            return RayClassification(status="ambiguous", ray=name)
        # containing sector: bracket between the nearest rays on either side
        above = min(rays, key=lambda r: _angle_diff(r[1], phase) % (2 * math.pi))
        below = min(rays, key=lambda r: _angle_diff(phase, r[1]) % (2 * math.pi))
        sector = _sector_name(above[0], below[0])
        return RayClassification(status="sector", sector=sector,
                                 bounds=(above[0], below[0]))


def _sector_name(anticlockwise: str, clockwise: str) -> str:
    """Human name for the sector with the given bounding active rays.

    Sigma(n) is the convex sector bounded by ell(n-1) and ell(n); its image
    under -1 is named -Sigma(n).  Sectors adjacent to +-ell_inf within the
    scanned range do not resolve to a finite label and keep the raw bounds.
    """
    for prefix in ("", "-"):
        pat = prefix + "ell("
        if (anticlockwise.startswith(pat) and clockwise.startswith(pat)
                and not (prefix == "" and (anticlockwise[0] == "-" or clockwise[0] == "-"))):
            n_acw = int(anticlockwise.split("(")[1].rstrip(")"))
            n_cw = int(clockwise.split("(")[1].rstrip(")"))
            # arg(ell(n)) decreases with n, so the anticlockwise bound has the
            # smaller index and the sector is Sigma(larger index)
            if n_cw == n_acw + 1:
                return f"{prefix}Sigma({n_cw})"
    return f"sector({anticlockwise},{clockwise})"
