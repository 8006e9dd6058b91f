"""Inverse branches of prerenormalizations in the complex plane.

The n-th prerenormalization on L_n+- is a composition of branches of f given
by the level-n word.  Its inverse is continued from a real seed along a
straight path by predictor-corrector Newton on the composition, for many
targets at once.  The pulled-back regions are then used to certify the
conditions of a power-like extension with an explicit constant nu.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import CertificationError, ContinuationError, DepthError, DomainError, LorenzError
from .geometry import (Dt_boundary, Flower, Region, default_sigma, diam_Dt, in_Dt,
                       modulus_lower_bound, view_parameter)
from .intervals import compute_level
from .maps import MINUS, PLUS, LorenzMap, eval_branch
from .renorm import Prerenormalization, apply_word, prerenormalize

RESIDUAL_TOL = 1e-11


def word_eval(f: LorenzMap, word, z):
    """Value and derivative of the branch composition at z (arrays allowed)."""
    z = np.asarray(z, dtype=complex)
    d = np.ones(z.shape, dtype=complex)
    for s in word:
        z, dz = eval_branch(f, s, z, deriv=True)
        d = d * dz
    return z, d


def _bisect_real(f, word, y, lo, hi):
    """Real preimage of y under the (monotone) word on [lo, hi]."""
    glo = float(apply_word(f, word, lo)) - y
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = float(apply_word(f, word, mid)) - y
        if gm == 0:
            return mid
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi = mid
        if hi - lo <= 4e-16 * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def _newton(f, word, z, target, steps=10):
    """Vectorised Newton on word(z) = target; returns (z, converged mask)."""
    z = z.copy()
    ok = np.zeros(z.shape, bool)
    live = np.arange(z.size)
    for _ in range(steps):
        try:
            val, d = word_eval(f, word, z[live])
        except DomainError:
            return z, ok
        r = val - target[live]
        done = np.abs(r) <= RESIDUAL_TOL
        ok[live[done]] = True
        with np.errstate(all="ignore"):
            step = r / d
        bad = ~np.isfinite(step)
        keep = ~done & ~bad
        z[live[keep]] -= step[keep]
        live = live[keep]
        if live.size == 0:
            break
    return z, ok


def inverse_branch(f: LorenzMap, word, w, seed):
    """Continue the inverse of word from the real point ``seed`` to ``w``.

    ``w`` may be an array.  The path runs straight from word(seed) to each
    target.  Raises ContinuationError if any target cannot be reached.
    """
    z, ok, pos = inverse_branch_many(f, word, w, seed)
    if not np.all(ok):
        k = int(np.argmin(np.ravel(ok)))
        raise ContinuationError("inverse branch continuation failed",
                                position=float(np.ravel(pos)[k]))
    return complex(z) if np.ndim(z) == 0 else z


def _advance(f, word, w0, w, z, s0, s1, floor):
    """Move the preimages z of w0 + s0 (w - w0) to parameter s1.

    Elements whose predictor-corrector step fails are split into two half
    steps, recursively, down to a step of ``floor``.  Returns (z, reached),
    where reached holds the parameter each element got to.
    """
    target = w0 + s1 * (w - w0)
    try:
        val, d = word_eval(f, word, z)
        with np.errstate(all="ignore"):
            zp = z + (target - val) / d
        zn, ok = _newton(f, word, zp, target)
        # a corrector that moves further than the predictor step signals a branch jump
        ok &= np.abs(zn - zp) <= np.abs(zp - z) + 1e-14
    except DomainError:
        zn, ok = z.copy(), np.zeros(z.shape, bool)
    reached = np.where(ok, s1, s0)
    zn = np.where(ok, zn, z)
    bad = np.flatnonzero(~ok)
    if bad.size and (s1 - s0) / 2 >= floor:
        mid = 0.5 * (s0 + s1)
        zb, rb = _advance(f, word, w0[bad], w[bad], z[bad], s0, mid, floor)
        go = rb >= mid
        if np.any(go):
            idx = bad[go]
            zc, rc = _advance(f, word, w0[idx], w[idx], zb[go], mid, s1, floor)
            zb[go], rb[go] = zc, rc
        zn[bad], reached[bad] = zb, rb
    return zn, reached


def _leg(f, word, z, wa, wb, steps, floor):
    """Continue preimages z of wa along straight segments to wb."""
    pos = np.zeros(wa.shape)
    alive = np.ones(wa.shape, bool)
    for k in range(1, steps + 1):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        zn, r = _advance(f, word, wa[idx], wb[idx], z[idx], (k - 1) / steps, k / steps, floor)
        z[idx], pos[idx] = zn, r
        alive[idx[r < k / steps]] = False
    return z, pos


def inverse_branch_many(f, word, w, seed, steps=16, floor=1e-6, height=None):
    """As inverse_branch, returning (z, success mask, reached path positions).

    Without ``height`` the path is the straight segment from word(seed) to
    w.  With ``height`` it is the polyline through word(seed) + ih and
    Re(w) + ih, h = max(height, |Im w|) on the side of w, which keeps targets
    close to the real axis away from the real critical values until the
    final vertical leg.  Positions are reported as fractions of the path.
    """
    w = np.asarray(w, dtype=complex)
    shape = w.shape
    w = w.ravel()
    seed = np.broadcast_to(np.asarray(seed, dtype=float), shape).ravel()
    uniq, inv = np.unique(seed, return_inverse=True)
    w0 = np.array([complex(apply_word(f, word, s)) for s in uniq])[inv.ravel()]
    z = seed.astype(complex)
    if height is None:
        points = [w0, w]
    else:
        sgn = np.where(w.imag < 0, -1.0, 1.0)
        h = sgn * np.maximum(height, np.abs(w.imag))
        points = [w0, w0 + 1j * h, w.real + 1j * h, w]
    legs = len(points) - 1
    pos = np.zeros(w.shape)
    ok = np.ones(w.shape, bool)
    for i in range(legs):
        idx = np.flatnonzero(ok)
        # paths sharing start and end (e.g. the first vertical leg) are traced once
        key = np.stack([z[idx], points[i][idx], points[i + 1][idx]], axis=1)
        key, first, back = np.unique(key, axis=0, return_index=True, return_inverse=True)
        back = back.ravel()
        sel = idx[first]
        zi, pi = _leg(f, word, z[sel], points[i][sel], points[i + 1][sel], steps, floor)
        z[idx] = zi[back]
        pos[idx] = (i + pi[back]) / legs
        ok[idx] = pi[back] >= 1.0
    return z.reshape(shape), ok.reshape(shape), pos.reshape(shape)


# -- level data ------------------------------------------------------------

def _L_total(pr, k):
    """L_k = L_k- u L_k+ as one interval (L_0 is the whole of [0, 1])."""
    if k == 0:
        return (0.0, 1.0)
    lv = compute_level(pr.f, pr, k)
    return (lv.L_minus[0], lv.L_plus[1])


def _upper_samples(J, sigma, count):
    """Points of D_sigma(J) in the upper half-plane: boundary arc plus layers."""
    nb = max(count // 2, 8)
    arc = Dt_boundary(J, sigma, nb + 2)[1:nb + 1]
    pts = [arc]
    layers = 4
    per = max((count - nb) // layers, 4)
    for s in (1.3, 2.0, 4.0, 10.0):
        g = Dt_boundary(J, sigma * s, per + 2)[1:per + 1]
        pts.append(g)
    pts = np.concatenate(pts)
    return pts[pts.imag > 0]


def _seeds(f, word, L, w):
    """Real seeds: preimages of Re(w) clipped into the middle half of f(L).

    Endpoints of f(L) are critical values of the word, so paths are kept
    away from them; the straight path from a real seed to w stays in the
    open half-plane of w.
    """
    y0, y1 = sorted((float(apply_word(f, word, L[0])), float(apply_word(f, word, L[1]))))
    lo, hi = y0 + 0.25 * (y1 - y0), y1 - 0.25 * (y1 - y0)
    grid = np.linspace(lo, hi, 33)
    y = np.clip(w.real, lo, hi)
    # one bisection per lattice value
    k = np.clip(np.searchsorted(grid, y), 0, grid.size - 1)
    pre = {j: _bisect_real(f, word, grid[j], *L) for j in np.unique(k)}
    return np.array([pre[j] for j in k])


def _pullback(f, word, L, w, height=None):
    seeds = _seeds(f, word, L, w)
    return inverse_branch_many(f, word, w, seeds, height=height)


@dataclass
class SideSamples:
    side: str
    C_length: float
    rhs_scale: float
    distances: list
    ratios: list
    failures: int
    preimages: list = field(default_factory=list, repr=False)


@dataclass
class MainInequalityReport:
    n: int
    m: int
    sigma: float
    L_outer: tuple
    sides: list
    empirical_B1: float
    attempted: int
    failures: int

    @property
    def success_rate(self):
        return 1.0 - self.failures / max(self.attempted, 1)

    def to_dict(self):
        return dict(n=self.n, m=self.m, sigma=self.sigma, L_outer=list(self.L_outer),
                    empirical_B1=self.empirical_B1, attempted=self.attempted,
                    failures=self.failures, success_rate=self.success_rate,
                    sides=[dict(side=s.side, C_length=s.C_length, rhs_scale=s.rhs_scale,
                                max_distance=max(s.distances, default=None),
                                max_ratio=max(s.ratios, default=None),
                                failures=s.failures) for s in self.sides])

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _prerenormalization(f, n, pr, max_time):
    if pr is None:
        pr = prerenormalize(f, n + 1, max_time)
    if pr is None or pr.depth < n + 1:
        raise DepthError(f"map must be {n + 1} times renormalizable",
                         0 if pr is None else pr.depth)
    return pr


def verify_main_inequality(f: LorenzMap, n: int, m: int, sample_count=1024, sigma=None,
                           pr: Prerenormalization = None, max_time=8) -> MainInequalityReport:
    """Pull D_sigma(L_{n-m}) minus R back by the inverse of each level-n branch.

    Reports |preimage - c| and its ratio to |L_{n-m}|^(1/alpha) / |C_n+-|^((1-alpha)/alpha).
    Continuation failures are counted, not raised.
    """
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got n={n}, m={m}")
    pr = _prerenormalization(f, n, pr, max_time)
    sigma = default_sigma(f.alpha) if sigma is None else sigma
    lv = compute_level(f, pr, n)
    Lout = _L_total(pr, n - m)
    w = _upper_samples(Lout, sigma, sample_count)
    a = f.alpha
    sides, attempted, failures, B1 = [], 0, 0, 0.0
    for side, L, Cs in ((MINUS, lv.L_minus, lv.C_minus), (PLUS, lv.L_plus, lv.C_plus)):
        z, ok, _ = _pullback(f, pr.word(n, side), L, w)
        Clen = Cs[1] - Cs[0]
        scale = (Lout[1] - Lout[0]) ** (1 / a) / Clen ** ((1 - a) / a)
        dist = np.abs(z[ok] - f.c)
        ratio = dist / scale
        sides.append(SideSamples(side, Clen, scale, dist.tolist(), ratio.tolist(),
                                 int(np.count_nonzero(~ok)), z[ok].tolist()))
        attempted += w.size
        failures += int(np.count_nonzero(~ok))
        if ratio.size:
            B1 = max(B1, float(ratio.max()))
    return MainInequalityReport(n, m, sigma, Lout, sides, B1, attempted, failures)


# -- flowers around pullbacks ----------------------------------------------

@dataclass(frozen=True)
class FlowerWitness:
    flower: Flower
    K1: float
    K2: float
    t: float


def flower_witness(points, L, c, sigma, grid=(0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3)):
    """Search a (K1, K2)-bounded flower of L with petal parameter sigma
    containing ``points``; returns the witness with the largest min(K1, K2, t)."""
    a, b = L
    pts = np.asarray(points, dtype=complex)
    pts = pts[pts.imag != 0]
    best = None
    for K1 in grid:
        for K2 in grid:
            if K1 + K2 >= 0.9:
                continue
            if np.isclose(c, a):
                d, e = a + K1 * (b - a), b - K2 * (b - a)
            else:
                d, e = a + K2 * (b - a), b - K1 * (b - a)
            rest = pts[~(in_Dt((a, d), sigma, pts) | in_Dt((e, b), sigma, pts))]
            t = float(np.min(view_parameter((d, e), rest))) if rest.size else 10.0
            if not t > 0:
                continue
            t = min(t, 10.0)
            score = min(K1, K2, t)
            if best is None or score > best[0]:
                best = (score, FlowerWitness(Flower(a, d, e, b, t, sigma), K1, K2, t))
    return None if best is None else best[1]


def flower_containment(f, n, pr=None, sigma=None, sample_count=512, max_time=8):
    """Flowers around the pullbacks of D_sigma(L_n) minus R by both level-n branches."""
    pr = _prerenormalization(f, n, pr, max_time)
    sigma = default_sigma(f.alpha) if sigma is None else sigma
    lv = compute_level(f, pr, n)
    Ln = (lv.L_minus[0], lv.L_plus[1])
    w = _upper_samples(Ln, sigma, sample_count)
    out = {}
    for side, L in ((MINUS, lv.L_minus), (PLUS, lv.L_plus)):
        z, ok, _ = _pullback(f, pr.word(n, side), L, w)
        pts = np.concatenate([z[ok], np.conj(z[ok])])
        out[side] = flower_witness(pts, L, f.c, sigma)
    return out


# -- the analyticity radius ------------------------------------------------

_RHO_CAP = 10.0


def bernstein_rho(coeffs, rel=1e-14):
    """Decay rate rho of Chebyshev coefficients, |a_k| ~ rho^-k (capped)."""
    a = np.abs(np.asarray(coeffs, dtype=float))
    if a.size < 2 or a.max() == 0:
        return _RHO_CAP
    sig = np.flatnonzero(a > rel * a.max())
    k, la = sig, np.log(a[sig])
    if k.size < 3 or k[-1] < 2:
        return _RHO_CAP
    # upper envelope: slope through the largest tail coefficients
    slope = np.polyfit(k[1:], la[1:], 1)[0] if k.size > 2 else -np.inf
    # a flat or growing tail means no analyticity beyond the interval
    if slope >= 0:
        return 1.0
    return float(min(np.exp(-slope), _RHO_CAP))


@dataclass
class LrReport:
    ok: bool
    r: float
    r_cap: float
    rho_minus: float
    rho_plus: float

    def __bool__(self):
        return self.ok


def _r_cap(rep, rho):
    """Radius of the image disc around eta([0, T]) guaranteed by the ellipse."""
    T = rep.domain_len
    s = T / 4 * (rho - 1 / rho)
    x = np.linspace(0, T, 257)
    dmin = float(np.min(np.abs(rep.deriv(x))))
    return 0.5 * s * dmin


def analyticity_radius(f: LorenzMap) -> float:
    """Largest r accepted by check_L_r_membership."""
    return min(_r_cap(f.eta_minus, bernstein_rho(f.eta_minus.coeffs)),
               _r_cap(f.eta_plus, bernstein_rho(f.eta_plus.coeffs)))


def check_L_r_membership(f: LorenzMap, r: float) -> LrReport:
    """Neighbourhood-radius test from the decay of the eta coefficients.

    The Bernstein ellipse of each eta has semi-minor axis T (rho - 1/rho) / 4;
    half of that radius times min |eta'| is taken as the radius of the
    neighbourhood of the image (and of the disc around the critical value)
    covered univalently.  Entire series are capped at rho = 10.
    """
    if not r > 0:
        raise DomainError(f"need r > 0, got {r}")
    rm = bernstein_rho(f.eta_minus.coeffs)
    rp = bernstein_rho(f.eta_plus.coeffs)
    cap = analyticity_radius(f)
    return LrReport(bool(r < cap), r, cap, rm, rp)


# -- power-like extension --------------------------------------------------

def _is_simple(poly, max_vertices=1024):
    """No two non-adjacent edges of the closed polyline cross."""
    v = np.asarray(poly, dtype=complex)
    if v.size > max_vertices:
        v = v[np.linspace(0, v.size - 1, max_vertices).astype(int)]
    p, q = v, np.roll(v, -1)
    n = v.size

    def cross(a, b):
        return a.real * b.imag - a.imag * b.real

    for i in range(n):
        j = np.arange(i + 2, n)
        if i == 0:
            j = j[j != n - 1]
        if j.size == 0:
            continue
        r, s = q[i] - p[i], q[j] - p[j]
        den = cross(r, s)
        with np.errstate(all="ignore"):
            t = cross(p[j] - p[i], s) / den
            u = cross(p[j] - p[i], r) / den
        if np.any((den != 0) & (t > 0) & (t < 1) & (u > 0) & (u < 1)):
            return False
    return True


@dataclass
class PowerLikeExtension:
    n: int
    m: int
    sigma: float
    D: np.ndarray = field(repr=False)           # rescaled boundary of D
    U_minus: np.ndarray = field(repr=False)     # rescaled boundary polylines
    U_plus: np.ndarray = field(repr=False)
    slits_minus: list = field(default_factory=list)
    slits_plus: list = field(default_factory=list)
    nu_certified: float = 0.0
    diam_D: float = 0.0
    c_rescaled: float = 0.0
    conditions: dict = field(default_factory=dict)
    containment_margin: float = 0.0
    simple: dict = field(default_factory=dict)
    success_rate: float = 1.0

    def to_dict(self):
        return dict(n=self.n, m=self.m, sigma=self.sigma, nu_certified=self.nu_certified,
                    diam_D=self.diam_D, c_rescaled=self.c_rescaled,
                    conditions=self.conditions, containment_margin=self.containment_margin,
                    simple=self.simple, success_rate=self.success_rate,
                    slits_minus=self.slits_minus, slits_plus=self.slits_plus)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _upper_boundary(J, sigma, n):
    """Upper boundary of D_sigma(J) n {Im >= 0}: arc b -> a, then J lifted slightly."""
    arc = Dt_boundary(J, sigma, n + 1)[:n + 1]
    lift = 1e-9 * (J[1] - J[0])
    base = np.linspace(J[0], J[1], n // 2 + 2)[1:-1] + 1j * lift
    return arc[1:-1], base


def _gap_chart(y0, y1):
    """z -> sqrt((z - y0) / (y1 - z)): conformal off (-inf, y0] u [y1, inf).

    Real points outside [y0, y1] are boundary points reached from above or
    below; ``side`` (+1 / -1) selects the limit, which is +-i sqrt|ratio|.
    """
    def psi(z, side=None):
        z = np.asarray(z, dtype=complex)
        r = (z - y0) / (y1 - z)
        if side is None:
            return np.sqrt(r)
        return side * 1j * np.sqrt(np.abs(r.real))
    return psi


def _outer_boundary(Dreal, sigma, y0, y1, n):
    """Boundary of D_sigma(Dreal) minus the real points outside (y0, y1), as
    (points, side) pieces traversed once: side is +1 / -1 on the upper /
    lower edge of a slit and None elsewhere."""
    a, b = Dreal
    bd = Dt_boundary(Dreal, sigma, n)
    upper, lower = bd[1:n - 1], bd[n:-1]
    pieces = []
    if y1 < b:
        pieces.append((np.linspace(y1, b, n // 4)[1:-1] + 0j, 1))
    pieces.append((upper, None))
    if y0 > a:
        left = np.linspace(a, y0, n // 4)[1:-1] + 0j
        pieces.append((left, 1))
        pieces.append((left[::-1], -1))
    pieces.append((lower, None))
    if y1 < b:
        pieces.append((np.linspace(b, y1, n // 4)[1:-1] + 0j, -1))
    return pieces


def _charted_modulus(inner, Dreal, sigma, y0, y1, n):
    """Round-annulus bound for mod(inner, D minus slits) in the charts
    z, psi(z) and log psi(z), where psi opens the slits; the best one wins.

    All quantities are in the caller's coordinates (rescaled or not).
    """
    psi = _gap_chart(y0, y1)
    pieces = _outer_boundary(Dreal, sigma, y0, y1, n)
    best = 0.0
    sl = []
    if y0 > Dreal[0]:
        sl.append((Dreal[0], y0))
    if y1 < Dreal[1]:
        sl.append((y1, Dreal[1]))
    try:
        plain = modulus_lower_bound(inner, Region.from_polygon(Dt_boundary(Dreal, sigma, n),
                                                               slits=sl))
        best = plain.value
    except DomainError:
        pass
    bd = np.concatenate([psi(p, side) for p, side in pieces])
    w = psi(inner)
    for chart_bd, chart_in in ((bd, w), (np.log(bd[np.abs(bd) > 1e-12]), np.log(w))):
        try:
            mb = modulus_lower_bound(chart_in, Region.from_polygon(chart_bd))
        except DomainError:
            continue
        best = max(best, mb.value)
    return best


def power_like_extension(f: LorenzMap, n: int, m: int, pr: Prerenormalization = None,
                         sigma=None, vertices=4096, max_time=8) -> PowerLikeExtension:
    """Build D = D_sigma(L_{n-m}) and the pullbacks U+-, rescaled so C_n = [0, 1],
    and certify the four conditions with one constant nu.

    Raises CertificationError naming the first condition with nu <= 0.
    """
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got n={n}, m={m}")
    pr = _prerenormalization(f, n, pr, max_time)
    sigma = default_sigma(f.alpha) if sigma is None else sigma
    lv = compute_level(f, pr, n)
    Dreal = _L_total(pr, n - m)
    p, q = lv.C
    scale = q - p

    def A(z):
        return (np.asarray(z) - p) / scale

    arc, base = _upper_boundary(Dreal, sigma, vertices // 2)
    D_poly = A(Dt_boundary(Dreal, sigma, vertices // 2))
    conditions, U, slits, simple = {}, {}, {}, {}
    attempted = failed = 0
    margin = np.inf
    for side, L in ((MINUS, lv.L_minus), (PLUS, lv.L_plus)):
        word = pr.word(n, side)
        y0, y1 = sorted((float(apply_word(f, word, L[0])), float(apply_word(f, word, L[1]))))
        # boundary of the upper half of D minus the part of R inside f(L), from
        # y1 around to y0; its pullback joins the two ends of L
        w = np.concatenate([base[base.real >= y1], arc, base[base.real <= y0]])
        z, ok, _ = _pullback(f, word, L, w, height=0.25 * (Dreal[1] - Dreal[0]))
        attempted += w.size
        failed += int(np.count_nonzero(~ok))
        if np.count_nonzero(~ok) > 0.01 * w.size:
            raise CertificationError(f"{side}: too many continuation failures", "continuation")
        z = np.concatenate([[L[1]], z[ok], [L[0]]])
        poly = A(np.concatenate([z, np.conj(z[::-1])]))
        U[side] = poly
        simple[side] = _is_simple(poly)
        # the image of the branch: D minus the real points outside f(L)
        sl = []
        if y0 > Dreal[0]:
            sl.append((float(A(Dreal[0])), float(A(y0))))
        if y1 < Dreal[1]:
            sl.append((float(A(y1)), float(A(Dreal[1]))))
        slits[side] = sl
        outer = Region.from_polygon(D_poly, slits=sl)
        inner = np.concatenate([poly, A(np.linspace(L[0], L[1], 64)) + 0j])
        margin = min(margin, float(np.min(outer.boundary_distance(inner[inner.imag != 0]))))
        conditions[f"modulus_{side}"] = _charted_modulus(
            inner, (float(A(Dreal[0])), float(A(Dreal[1]))), sigma, float(A(y0)),
            float(A(y1)), vertices // 2)
    diam = diam_Dt(Dreal, sigma) / scale
    c_resc = float(A(f.c))
    conditions["inverse_diameter"] = 1.0 / diam
    conditions["critical_point"] = min(c_resc, 1.0 - c_resc)
    conditions["analyticity_radius"] = analyticity_radius(pr.level(n).renormalized)
    for name, val in conditions.items():
        if not val > 0:
            raise CertificationError(f"condition {name} fails: value {val}", name)
    nu = min(min(conditions.values()), 0.5 * (1 - 1e-12))
    return PowerLikeExtension(n, m, sigma, D_poly, U[MINUS], U[PLUS], slits[MINUS],
                              slits[PLUS], float(nu), float(diam), c_resc,
                              {k: float(v) for k, v in conditions.items()}, margin,
                              simple, 1.0 - failed / attempted)


@dataclass
class ComplexBoundsScan:
    n: int
    results: dict        # m -> PowerLikeExtension or error message
    best_m: int = None
    best_nu: float = 0.0

    def to_dict(self):
        return dict(n=self.n, best_m=self.best_m, best_nu=self.best_nu,
                    results={str(m): (r.to_dict() if isinstance(r, PowerLikeExtension) else r)
                             for m, r in self.results.items()})


def scan_offsets(f, n, offsets=(1, 2, 3, 4), pr=None, sigma=None, vertices=4096, max_time=8):
    """power_like_extension over level offsets; keeps the best certified nu."""
    pr = _prerenormalization(f, n, pr, max_time)
    out = ComplexBoundsScan(n, {})
    for m in offsets:
        if m > n:
            out.results[m] = "offset exceeds level"
            continue
        try:
            ext = power_like_extension(f, n, m, pr=pr, sigma=sigma, vertices=vertices)
        except (LorenzError, FloatingPointError) as exc:
            out.results[m] = f"{type(exc).__name__}: {exc}"
            continue
        out.results[m] = ext
        if ext.nu_certified > out.best_nu:
            out.best_m, out.best_nu = m, ext.nu_certified
    return out


def report_json(obj):
    d = obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj)
    return json.dumps(d, indent=2, default=float)
