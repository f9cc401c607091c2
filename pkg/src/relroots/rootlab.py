"""Root-level analysis of reliability and H-polynomials.

Numerical roots come from Aberth-Ehrlich simultaneous iteration in double
precision on each square-free factor (found exactly), then Newton polishing
in mpmath at four times the working precision. Everything that claims a
root is *rational* is decided by exact evaluation only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError
from .multigraph import Multigraph
from .poly import Poly
from . import relpoly

WORKING_DPS = 16
POLISH_DPS = 4 * WORKING_DPS
MAX_ITER = 200
RESIDUAL_BOUND = 1e-10
REAL_TOL = 1e-10
PROXIMITY_TOL = 1e-8


@dataclass(frozen=True)
class ComplexRoot:
    """A polished root with the residual |H(z)| at extended precision."""

    re: mpmath.mpf
    im: mpmath.mpf
    residual: float
    multiplicity: int = 1

    @property
    def z(self) -> complex:
        return complex(float(self.re), float(self.im))

    @property
    def modulus(self) -> float:
        with mpmath.workdps(POLISH_DPS):
            return float(mpmath.hypot(self.re, self.im))

    def modulus_mp(self) -> mpmath.mpf:
        with mpmath.workdps(POLISH_DPS):
            return mpmath.hypot(self.re, self.im)

    def is_real(self, tol: float = REAL_TOL) -> bool:
        return abs(float(self.im)) <= tol

    def to_json(self) -> dict:
        return {
            "re": decimal_str(self.re),
            "im": decimal_str(self.im),
            "residual": f"{self.residual:.3e}",
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class RootSet:
    """Roots of Rel(G): the H-polynomial's roots plus 1 with multiplicity n-1.

    ``complex_roots`` holds each distinct root of H once with its
    multiplicity; ``all_roots()`` expands them.
    """

    complex_roots: tuple[ComplexRoot, ...]
    trivial_root_one_multiplicity: int = 0
    rational_roots: frozenset[Fraction] = field(default_factory=frozenset)

    @property
    def degree(self) -> int:
        return sum(r.multiplicity for r in self.complex_roots)

    def all_roots(self) -> list[ComplexRoot]:
        out = []
        for r in self.complex_roots:
            out.extend([r] * r.multiplicity)
        return out

    def moduli(self, include_one: bool = True) -> list[float]:
        mods = [r.modulus for r in self.complex_roots]
        if include_one and self.trivial_root_one_multiplicity:
            mods.append(1.0)
        return mods

    def min_modulus(self, include_one: bool = True) -> float | None:
        mods = self.moduli(include_one)
        return min(mods) if mods else None

    def to_json(self) -> dict:
        return {
            "complex_roots": [r.to_json() for r in self.complex_roots],
            "trivial_root_one_multiplicity": self.trivial_root_one_multiplicity,
            "rational_roots": sorted((fraction_str(x) for x in self.rational_roots)),
        }


@dataclass(frozen=True)
class Annulus:
    r: Fraction
    R: Fraction


@dataclass(frozen=True)
class GcdTest:
    """Inner-circle test: a root of modulus exactly r needs gcd(S) > 1."""

    S: tuple[int, ...]
    gcd: int | None
    inner_root_excluded: bool

    @property
    def verdict(self) -> str:
        if not self.S:
            return "inconclusive"
        return "excluded" if self.inner_root_excluded else "not-excluded"


@dataclass(frozen=True)
class LocationChecks:
    real_range_ok: bool
    modulus_bound_ok: bool
    min_modulus_ok: bool

    def all_ok(self) -> bool:
        return self.real_range_ok and self.modulus_bound_ok and self.min_modulus_ok


def decimal_str(x, digits: int = 20) -> str:
    """Fixed-point decimal with ``digits`` significant digits.

    Conversion happens at raised precision so Fractions and high-precision
    mpf values are not first rounded to double.
    """
    with mpmath.workdps(digits + 10):
        if isinstance(x, Fraction):
            v = mpmath.mpf(x.numerator) / x.denominator
        else:
            v = mpmath.mpf(x)
        if not v:
            return "0"
        s = mpmath.nstr(v, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    return s[:-2] if s.endswith(".0") else s


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# exact square-free decomposition


def _frac_poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = a[:]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, x in enumerate(b):
            a[k + i] -= c * x
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _frac_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b and any(b):
        _, r = _frac_poly_divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [x / lead for x in a]


def _primitive(c: Sequence[Fraction]) -> tuple[int, ...]:
    den = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in c), 1)
    ints = [int(x * den) for x in c]
    g = reduce(gcd, ints, 0) or 1
    if ints[-1] < 0:
        g = -g
    return tuple(i // g for i in ints)


def squarefree_factors(P: Poly) -> list[tuple[tuple[int, ...], int]]:
    """Yun's algorithm: P = c * prod f_k^k with pairwise coprime square-free f_k.

    Returns ``[(coeffs of f_k, k), ...]`` skipping constant factors.
    """
    a = [Fraction(x) for x in P.coeffs]
    if len(a) <= 1:
        return []
    da = [i * x for i, x in enumerate(a)][1:]
    g = _frac_gcd(a, da)
    b, _ = _frac_poly_divmod(a, g)
    c, _ = _frac_poly_divmod(da, g)
    out = []
    k = 1
    while len(b) > 1:
        db = [i * x for i, x in enumerate(b)][1:]
        d = [x - y for x, y in zip(c + [Fraction(0)] * (len(db) - len(c)),
                                   db + [Fraction(0)] * (len(c) - len(db)))]
        while d and d[-1] == 0:
            d.pop()
        h = _frac_gcd(b, d) if d else b
        if len(h) > 1:
            out.append((_primitive(h), k))
        b, _ = _frac_poly_divmod(b, h)
        if d:
            c, _ = _frac_poly_divmod(d, h)
        else:
            c = []
        k += 1
    return out


# ---------------------------------------------------------------------------
# numerical solver


def _aberth(coeffs: Sequence[int]) -> np.ndarray:
    """Simultaneous iteration on a square-free integer polynomial (ascending)."""
    deg = len(coeffs) - 1
    a = np.array([float(c) for c in coeffs[::-1]])  # descending
    a = a / a[0]
    if deg == 1:
        return np.array([complex(-a[1])])
    da = np.polyder(a)
    # start on a circle between the Cauchy-type bounds, slightly rotated
    mags = np.abs(a[1:])
    radius = float(np.max(mags ** (1.0 / np.arange(1, deg + 1))))
    radius = max(radius, 1e-3)
    centre = -a[1] / deg
    k = np.arange(deg)
    z = centre + radius * np.exp(1j * (2 * np.pi * k / deg + 0.4)) * (1 + 0.01 * k / deg)
    done = np.zeros(deg, dtype=bool)
    step = np.full(deg, np.inf)
    for _ in range(MAX_ITER):
        p = np.polyval(a, z)
        dp = np.polyval(da, z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w) & ~done, w, 0)
        z = z - w
        step = np.where(done, step, np.abs(w))
        # double precision stalls near 1e-14; mp Newton polishing finishes the job
        done |= step <= 1e-11 * np.maximum(np.abs(z), 1e-3)
        if done.all():
            return z
    if np.all(step <= 1e-6 * np.maximum(np.abs(z), 1e-3)):
        return z
    raise ConvergenceError(f"Aberth iteration did not converge in {MAX_ITER} steps", partial=z)


def _polish(coeffs: Sequence[int], z0: complex) -> tuple[mpmath.mpc, float]:
    with mpmath.workdps(POLISH_DPS):
        c = [mpmath.mpf(x) for x in coeffs[::-1]]
        z = mpmath.mpc(z0)
        for _ in range(MAX_ITER):
            p, dp = mpmath.polyval(c, z, derivative=True)
            if dp == 0:
                break
            step = p / dp
            z -= step
            if abs(step) <= mpmath.mpf(10) ** (-POLISH_DPS + 4) * max(abs(z), 1):
                break
        else:
            raise ConvergenceError("Newton polishing did not converge", partial=z)
        res = abs(mpmath.polyval(c, z))
        # allowance for rounding inside the evaluation itself
        scale = sum(abs(x) * abs(z) ** i for i, x in enumerate(c[::-1]))
        bound = float(res + scale * mpmath.mpf(10) ** (-POLISH_DPS + 8))
        return z, bound


def _solve_squarefree(coeffs: Sequence[int], mult: int) -> list[ComplexRoot]:
    approx = _aberth(coeffs)
    polished = [_polish(coeffs, complex(z)) for z in approx]
    out: list[ComplexRoot] = []
    tiny = mpmath.mpf(10) ** (-POLISH_DPS // 2)
    for z, bound in polished:
        im = z.imag if abs(z.imag) > tiny * max(1, abs(z)) else mpmath.mpf(0)
        out.append(ComplexRoot(z.real, im, bound, mult))
    # enforce conjugate symmetry: keep upper half-plane roots, mirror them
    upper = [r for r in out if r.im > 0]
    lower = [r for r in out if r.im < 0]
    real = [r for r in out if r.im == 0]
    if len(upper) == len(lower):
        # negate at full precision; mpf arithmetic rounds to the ambient context
        with mpmath.workdps(POLISH_DPS):
            out = real + upper + [ComplexRoot(r.re, -r.im, r.residual, mult) for r in upper]
    return out


def roots(H: Poly, one_multiplicity: int = 0,
          rational: frozenset[Fraction] = frozenset()) -> RootSet:
    """All complex roots of H, with residual bounds, as a :class:`RootSet`."""
    if H.is_zero():
        raise DomainError("the zero polynomial has no root set")
    if H[0] == 0:
        raise DomainError("H(0) = 0; strip the factor q before solving")
    found: list[ComplexRoot] = []
    for f, k in squarefree_factors(H):
        found.extend(_solve_squarefree(f, k))
    found.sort(key=lambda r: (float(r.re), float(r.im)))
    return RootSet(tuple(found), one_multiplicity, frozenset(rational))


def reliability_roots(G: Multigraph, cache=None) -> RootSet:
    """Roots of Rel(G): H-polynomial roots, 1 with multiplicity n-1, and
    the exactly confirmed rational roots."""
    G = G.without_loops()
    if not G.is_connected():
        raise DomainError("reliability roots need a connected graph")
    rel = relpoly.reliability_poly(G, cache)
    H = relpoly.h_from_rel(rel, G.n, G.m - G.n + 1)
    rs = roots(Poly(H), G.n - 1)
    rat = _exact_rationals(rel, G.n) if G.n >= 2 else frozenset()
    return RootSet(rs.complex_roots, G.n - 1, rat)


# ---------------------------------------------------------------------------
# coefficient-ratio criteria


def _positive_coeffs(H) -> list[int]:
    c = list(H.coeffs if isinstance(H, Poly) else H)
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        raise DomainError("need a polynomial of degree >= 1")
    if any(x <= 0 for x in c):
        raise DomainError(f"all coefficients must be strictly positive, got {c}")
    return c


def ek_annulus(H) -> Annulus:
    """Eneström-Kakeya: all roots satisfy r <= |z| <= R with r, R the extreme
    ratios a_j / a_{j+1}."""
    c = _positive_coeffs(H)
    ratios = [Fraction(c[j], c[j + 1]) for j in range(len(c) - 1)]
    return Annulus(min(ratios), max(ratios))


def inner_circle_gcd_test(H) -> GcdTest:
    c = _positive_coeffs(H)
    r = ek_annulus(c).r
    S = tuple(i for i in range(1, len(c)) if Fraction(c[i - 1], c[i]) > r)
    if not S:
        return GcdTest(S, None, False)
    g = reduce(gcd, S)
    return GcdTest(S, g, g == 1)


def is_log_concave(H: Sequence[int]) -> bool:
    H = list(H)
    return all(H[i - 1] * H[i + 1] <= H[i] * H[i] for i in range(1, len(H) - 1))


# ---------------------------------------------------------------------------
# rational roots and location checks


def _exact_rationals(rel: Poly, n: int) -> frozenset[Fraction]:
    cands = [Fraction(1)] + [Fraction(-1, k) for k in range(1, n)]
    return frozenset(x for x in cands if rel.eval_exact(x) == 0)


def rational_roots(G: Multigraph, cache=None) -> frozenset[Fraction]:
    """Exact rational roots of Rel(G), n >= 2.

    Candidates are 1 and -1/k for 1 <= k <= n-1, which cover every rational
    root: the constant term of H is 1, H has positive coefficients, and no
    root is smaller than 1/(n-1) in modulus.
    """
    if G.n < 2:
        raise DomainError("rational_roots() needs order >= 2")
    G = G.without_loops()
    if not G.is_connected():
        raise DomainError("rational_roots() needs a connected graph")
    return _exact_rationals(relpoly.reliability_poly(G, cache), G.n)


def _divisors(k: int) -> list[int]:
    k = abs(k)
    small = [d for d in range(1, int(k ** 0.5) + 1) if k % d == 0]
    return sorted(set(small + [k // d for d in small]))


def rational_roots_rrt(G: Multigraph, cache=None) -> frozenset[Fraction]:
    """All rational roots of Rel(G) by a full Rational Root Theorem search.

    Makes no assumption about where the roots may lie, so it serves as an
    independent check on :func:`rational_roots`. Since H(0) = 1 every
    rational root of H is +-1/s with s dividing the leading coefficient.
    """
    G = G.without_loops()
    if not G.is_connected():
        raise DomainError("rational_roots_rrt() needs a connected graph")
    rel = relpoly.reliability_poly(G, cache)
    H = Poly(relpoly.h_from_rel(rel, G.n, G.m - G.n + 1))
    found = {Fraction(1)} if G.n >= 2 else set()
    for s in _divisors(H[H.degree]) if H.degree > 0 else []:
        for x in (Fraction(1, s), Fraction(-1, s)):
            if H.eval_exact(x) == 0:
                found.add(x)
    return frozenset(found)


def unconfirmed_rational_neighbours(rs: RootSet, n: int,
                                    tol: float = PROXIMITY_TOL) -> list[Fraction]:
    """Candidates -1/k that some numerical root approaches within ``tol``
    without being an exact root. Empty on a sound run."""
    bad = []
    for k in range(1, n):
        x = Fraction(-1, k)
        if x in rs.rational_roots:
            continue
        if any(abs(r.z - float(x)) <= tol for r in rs.complex_roots):
            bad.append(x)
    return bad


def root_location_checks(G: Multigraph, rs: RootSet) -> LocationChecks:
    n = G.n
    pts = [r.z for r in rs.complex_roots]
    if rs.trivial_root_one_multiplicity:
        pts.append(1.0 + 0j)
    real_ok = True
    for z in pts:
        if abs(z.imag) <= REAL_TOL:
            if not (-1 - 1e-9 <= z.real <= -1e-9 or abs(z.real - 1) <= 1e-9):
                real_ok = False
    if n < 2:
        return LocationChecks(real_ok, not pts, not pts)
    mods = [abs(z) for z in pts]
    return LocationChecks(
        real_ok,
        all(x <= n - 1 + 1e-9 for x in mods),
        all(x >= 1 / (n - 1) - 1e-9 for x in mods),
    )


def annulus_contains(rs: RootSet, ann: Annulus, tol: float = 1e-9) -> bool:
    lo, hi = float(ann.r) - tol, float(ann.R) + tol
    return all(lo <= r.modulus <= hi for r in rs.complex_roots)
