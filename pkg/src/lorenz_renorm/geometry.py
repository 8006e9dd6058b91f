"""Complex neighbourhoods of real intervals.

For an open interval ``J = (a, b)`` and ``t > 0`` the domain ``D_t(J)`` is
the set of points that see ``J`` under an angle of at least ``2 arctan t``.
Its boundary is a pair of circular arcs through the endpoints of ``J``,
symmetric under conjugation.  The view parameter ``tan(angle / 2)`` is the
natural coordinate: ``z`` lies in ``D_t(J)`` iff the view parameter is >= t.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_TINY = 1e-300


# -- view angles -----------------------------------------------------------

def _check_interval(J):
    a, b = float(J[0]), float(J[1])
    if not a < b:
        raise DomainError(f"empty interval ({a}, {b})")
    return a, b


def view_angle(J, z):
    """Angle in [0, pi] under which z sees J (pi on J, 0 on the rest of R)."""
    a, b = _check_interval(J)
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        ang = np.abs(np.angle((z - b) / (z - a)))
    # endpoints see a degenerate angle
    return np.where((z == a) | (z == b), 0.0, ang)


def view_parameter(J, z):
    """tan(angle / 2); +inf on J itself."""
    ang = view_angle(J, z)
    with np.errstate(over="ignore"):
        return np.where(ang >= np.pi, np.inf, np.tan(ang / 2))


def in_Dt(J, t, z, tol=0.0):
    """Membership in D_t(J), with the closed (>=) convention on the angle."""
    if not t > 0:
        raise DomainError(f"need t > 0, got {t}")
    out = view_angle(J, z) >= 2 * np.arctan(t) - tol
    return bool(out) if np.ndim(out) == 0 else out


def angle_margin(J, t, z):
    """Signed angular distance to the boundary of D_t(J) (>= 0 inside)."""
    return view_angle(J, z) - 2 * np.arctan(t)


def diam_Dt(J, t):
    """Euclidean diameter of D_t(J).

    For t <= 1 the region is a union of two discs and its extreme points are
    +-i|J|/(2t) above and below the midpoint; for t >= 1 it is a lens whose
    widest chord is J itself.
    """
    a, b = _check_interval(J)
    return (b - a) * max(1.0, 1.0 / t)


def Dt_boundary(J, t, n=4096):
    """Closed polyline around D_t(J): upper arc from b to a, lower arc back."""
    a, b = _check_interval(J)
    theta = 2 * np.arctan(t)
    half = (b - a) / 2
    mid = (a + b) / 2
    radius = half / np.sin(theta)
    centre = mid + 1j * half / np.tan(theta)
    # the upper arc runs from b over the top to a; its angular span about the
    # centre is 2(pi - theta)
    start = np.angle(b - centre)
    phi = start + np.linspace(0.0, 2 * (np.pi - theta), n)
    upper = centre + radius * np.exp(1j * phi)
    upper[0], upper[-1] = b, a
    return np.concatenate([upper, np.conj(upper[::-1])[1:]])


def sigma_max(alpha):
    """Supremum of admissible sigma for exponent alpha: cot(pi / (2 alpha))."""
    if not alpha > 1:
        raise DomainError(f"need alpha > 1, got {alpha}")
    # cot(x) = (1 + cos 2x) / sin 2x is exact at alpha = 2
    y = np.pi / alpha
    return float((1 + np.cos(y)) / np.sin(y))


def default_sigma(alpha):
    return 0.9 * sigma_max(alpha)


# -- the one-step contraction of the view parameter ------------------------

def tilde_t(t, a):
    """Parameter of the smallest D_s((-a, a)) containing the image of D_t under F."""
    if not (0 <= a < 1):
        raise DomainError(f"need 0 <= a < 1, got {a}")
    if not a < t:
        raise DomainError(f"need a < t, got a={a}, t={t}")
    return (t * t - a * a) / (t * (1 + a * a))


def F_map(a, z):
    """(a^2 + 1) z / (z^2 + 1): maps the disc over (-a, a) into the slit plane."""
    z = np.asarray(z, dtype=complex)
    den = z * z + 1
    if np.any(np.abs(den) < 1e-15):
        raise DomainError("F has poles at +-i")
    out = (a * a + 1) * z / den
    return complex(out) if out.ndim == 0 else out


class TRecursionError(DomainError):
    def __init__(self, msg, index, values):
        super().__init__(msg)
        self.index = index
        self.values = list(values)


def compose_t_sequence(t1, lengths):
    """t_1, ..., t_{n+1} from t_{k+1} = (t_k^2 - l_k^2/4) / (t_k (1 + l_k^2/4)).

    Raises TRecursionError carrying the failing index k (0-based) when
    t_k <= l_k / 2.
    """
    if not 0 < t1 < 1:
        raise DomainError(f"need 0 < t1 < 1, got {t1}")
    ts = [float(t1)]
    for k, ell in enumerate(lengths):
        if ell < 0:
            raise DomainError(f"negative length at index {k}")
        h = ell / 2
        t = ts[-1]
        if t <= h:
            raise TRecursionError(f"t_{k} = {t} <= |I_{k}|/2 = {h}", k, ts)
        ts.append((t * t - h * h) / (t * (1 + h * h)))
    return ts


def product_lower_bound(t1, lengths, delta=0.5):
    """t1 * prod(1 - (l/2)^(1 + delta))."""
    h = np.asarray(lengths, dtype=float) / 2
    return float(t1 * np.prod(1 - h ** (1 + delta)))


# -- images of D_t under roots -----------------------------------------------

def principal_root(alpha):
    """z -> z^(1/alpha) with the cut along the negative reals."""
    def phi(z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z) ** (1 / alpha)
        return r * np.exp(1j * np.angle(z) / alpha)
    return phi


@dataclass
class RootInclusion:
    ok: bool
    tilde_t: float          # largest parameter that passed
    margin: float           # min view-parameter slack at tilde_t / 2
    samples: int
    nested_tilde_t: float   # parameter for which the union also sits in D((0,1))


def _slit_samples(a, n):
    # open slit (-a, 0): the point 0 itself is removed from the domain
    x = -a * (1 - np.linspace(0.0, 1.0, n + 1)[1:-1] ** 2)
    upper = x.astype(complex)
    lower = np.conj(upper)             # carries -0.0 in the imaginary part
    return upper, lower


def root_inclusion_check(a, t, c, alpha, f=None, sigma=None, n=4096):
    """Check f(D_t((-a, 1)) minus (-a, 0]) inside D_sigma((0,c)) u D_s((c,1)).

    ``f`` maps complex arrays and defaults to the principal alpha-th root;
    points on the slit are passed with signed zero imaginary parts.  The
    parameter s is searched: it is the least view parameter of (c, 1) over
    the samples not already covered by D_sigma((0, c)).
    """
    if not t > 0:
        raise DomainError(f"need t > 0, got {t}")
    if not a > 0:
        raise DomainError(f"need a > 0, got {a}")
    if not 0 <= c < 1:
        raise DomainError(f"need 0 <= c < 1, got {c}")
    sigma = default_sigma(alpha) if sigma is None else sigma
    f = principal_root(alpha) if f is None else f
    bd = Dt_boundary((-a, 1.0), t, n)
    up, lo = _slit_samples(a, n)
    # also a few interior layers, to catch a non-univalent f
    grid = []
    for s in np.linspace(1.0, 0.2, 5)[1:]:
        g = Dt_boundary((-a, 1.0), t / s, n // 4)
        grid.append(g[np.abs(g.imag) > 0])
    pts = np.concatenate([bd[bd.imag != 0]] + grid)
    w = np.concatenate([f(pts), f(up), f(lo)])
    if c > 0:
        in_left = in_Dt((0.0, c), sigma, w)
    else:
        in_left = np.zeros(w.shape, bool)
    rest = w[~in_left]
    vp = view_parameter((c, 1.0), rest) if rest.size else np.array([np.inf])
    s = float(np.min(vp))
    ok = bool(s > 0 and np.isfinite(s)) or (rest.size == 0)
    if not np.isfinite(s):
        s = 1e6
    margin = float(np.min(vp - s / 2)) if ok else float(s)
    # union inside D_s((0, 1)): only the left disc can stick out
    nested = s
    if c > 0:
        bl = Dt_boundary((0.0, c), sigma, n)
        bl = bl[bl.imag != 0]
        nested = min(s, float(np.min(view_parameter((0.0, 1.0), bl))))
    return RootInclusion(ok, s, margin, int(w.size), nested)


# -- flowers ---------------------------------------------------------------

@dataclass(frozen=True)
class FlowerBounds:
    K: float            # largest K for which the flower is K-bounded
    K1: float = None    # critical bound (petal at the critical end)
    K2: float = None


@dataclass(frozen=True)
class Flower:
    """D_sigma((a,d)) u D_t((d,e)) u D_sigma((e,b))."""
    a: float
    d: float
    e: float
    b: float
    t: float
    sigma: float

    def __post_init__(self):
        if not (self.a < self.d < self.e < self.b):
            raise DomainError(f"need a < d < e < b, got {self.a}, {self.d}, {self.e}, {self.b}")
        if not (self.t > 0 and self.sigma > 0):
            raise DomainError("flower parameters must be positive")

    @property
    def length(self):
        return self.b - self.a

    def contains(self, z, tol=0.0):
        z = np.asarray(z, dtype=complex)
        out = (in_Dt((self.a, self.d), self.sigma, z, tol)
               | in_Dt((self.d, self.e), self.t, z, tol)
               | in_Dt((self.e, self.b), self.sigma, z, tol))
        # the two inner endpoints lie on the real trace of the flower
        out = out | ((z.imag == 0) & ((z.real == self.d) | (z.real == self.e)))
        return bool(out) if out.ndim == 0 else out

    def bounds(self, c=None):
        """Boundedness constants; with c an endpoint the critical petal gives K1."""
        L = self.length
        left, right = (self.d - self.a) / L, (self.b - self.e) / L
        if c is None:
            return FlowerBounds(min(left, right))
        if np.isclose(c, self.a):
            return FlowerBounds(min(left, right), left, right)
        if np.isclose(c, self.b):
            return FlowerBounds(min(left, right), right, left)
        raise DomainError(f"critical point {c} is not an endpoint of the flower")

    def is_K_bounded(self, K):
        return self.bounds().K >= K

    def is_K1K2_bounded(self, K1, K2, c):
        fb = self.bounds(c)
        return fb.K1 >= K1 and fb.K2 >= K2

    def boundary(self, n=4096):
        """Outer boundary samples (vertices of the three boundary curves not
        covered by another petal), upper half first."""
        parts = []
        for J, s in (((self.a, self.d), self.sigma), ((self.d, self.e), self.t),
                     ((self.e, self.b), self.sigma)):
            parts.append(Dt_boundary(J, s, n))
        pts = np.concatenate(parts)
        keep = np.ones(pts.shape, bool)
        for i, (J, s) in enumerate((((self.a, self.d), self.sigma), ((self.d, self.e), self.t),
                                    ((self.e, self.b), self.sigma))):
            own = np.zeros(pts.shape, bool)
            own[i * len(parts[0]):(i + 1) * len(parts[0])] = True
            keep &= own | (angle_margin(J, s, pts) <= 0)
        return pts[keep]


def flower_diameter_check(F: Flower, J, n=1024):
    """Reported (t_hat, ratio) with F minus D_sigma((a,b)) inside D_t_hat(J)
    and diam D_t_hat(J) = ratio * |(a, b)|.

    J must contain [a, b]'s inner part; the check samples the petals'
    boundaries and interior layers.
    """
    I = (F.a, F.b)
    pts = [F.boundary(n)]
    for s in (1.5, 2.5, 5.0):
        sub = Flower(F.a, F.d, F.e, F.b, F.t * s, F.sigma * s)
        pts.append(sub.boundary(n // 2))
    pts = np.concatenate(pts)
    pts = pts[(pts.imag != 0) & ~in_Dt(I, F.sigma, pts)]
    if pts.size == 0:
        return np.inf, 1.0
    t_hat = float(np.min(view_parameter(J, pts)))
    if not t_hat > 0:
        raise DomainError("flower sticks out of every D_t(J)")
    return t_hat, diam_Dt(J, t_hat) / (F.b - F.a)


# -- regions and moduli ----------------------------------------------------

@dataclass
class Region:
    """Closed polygon (complex vertices) or disc, minus optional real slits.

    Slits are closed real segments (lo, hi) removed from the region.
    """
    polygon: np.ndarray = None
    disk: tuple = None
    slits: list = field(default_factory=list)

    @staticmethod
    def from_disk(centre, radius, slits=()):
        return Region(disk=(complex(centre), float(radius)), slits=list(slits))

    @staticmethod
    def from_polygon(vertices, slits=()):
        v = np.asarray(vertices, dtype=complex)
        if v[0] == v[-1]:
            v = v[:-1]
        return Region(polygon=v, slits=list(slits))

    def _in_shape(self, z):
        if self.disk is not None:
            c, r = self.disk
            return np.abs(z - c) < r
        x, y = z.real[..., None], z.imag[..., None]
        v = self.polygon
        x0, y0 = v.real, v.imag
        x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
        cond = (y0 > y) != (y1 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        return (np.count_nonzero(cond & (x < xc), axis=-1) % 2) == 1

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        out = self._in_shape(z)
        for lo, hi in self.slits:
            out &= ~((z.imag == 0) & (z.real >= lo) & (z.real <= hi))
        return out

    def boundary_distance(self, z):
        """Distance from each z to the boundary (including slits)."""
        z = np.asarray(z, dtype=complex)
        if self.disk is not None:
            c, r = self.disk
            d = np.abs(r - np.abs(z - c))
        else:
            v = self.polygon
            d = _segments_distance(z, v, np.roll(v, -1))
        for lo, hi in self.slits:
            d = np.minimum(d, _segments_distance(z, np.array([lo + 0j]), np.array([hi + 0j])))
        return d

    def bbox(self):
        if self.disk is not None:
            c, r = self.disk
            return c.real - r, c.real + r, c.imag - r, c.imag + r
        v = self.polygon
        return v.real.min(), v.real.max(), v.imag.min(), v.imag.max()

    def diameter(self):
        if self.disk is not None:
            return 2 * self.disk[1]
        v = self.polygon
        if len(v) > 2000:
            v = v[np.linspace(0, len(v) - 1, 2000).astype(int)]
        return float(np.max(np.abs(v[:, None] - v[None, :])))


def _segments_distance(z, p, q):
    """Min over segments [p_i, q_i] of the distance to z (vectorised, chunked)."""
    z = np.ravel(z)
    out = np.empty(z.shape)
    dq = q - p
    L2 = np.maximum(np.abs(dq) ** 2, _TINY)
    for i in range(0, z.size, 256):
        zz = z[i:i + 256, None]
        s = np.clip(((zz - p) * np.conj(dq)).real / L2, 0.0, 1.0)
        out[i:i + 256] = np.min(np.abs(zz - (p + s * dq)), axis=1)
    return out


@dataclass(frozen=True)
class ModulusBound:
    value: float
    centre: complex
    r_inner: float
    r_outer: float


def modulus_lower_bound(inner, outer: Region, grid=21, rounds=4):
    """Round-annulus lower bound for the modulus of outer minus inner.

    A disc D(z0, r1) containing ``inner`` and a disc D(z0, r2) contained in
    ``outer`` give the bound log(r2 / r1) / (2 pi).  z0 ranges over a grid on
    the bounding box of ``inner``, refined around the best point.
    """
    inner = np.ravel(np.asarray(inner, dtype=complex))
    if inner.size == 0:
        raise DomainError("empty inner set")
    # the closure is allowed: points on the boundary just force the bound to 0
    outside = ~outer.contains(inner) & (outer.boundary_distance(inner) > 1e-12)
    if np.any(outside):
        raise DomainError("inner set is not contained in the outer region")
    x0, x1 = inner.real.min(), inner.real.max()
    y0, y1 = inner.imag.min(), inner.imag.max()
    pad = max(x1 - x0, y1 - y0, 1e-12) * 0.05
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    best = ModulusBound(0.0, complex((x0 + x1) / 2, (y0 + y1) / 2), np.inf, 0.0)
    extra = [best.centre, complex(np.mean(inner))]
    for _ in range(rounds):
        X, Y = np.meshgrid(np.linspace(x0, x1, grid), np.linspace(y0, y1, grid))
        z0 = np.concatenate([(X + 1j * Y).ravel(), extra])
        extra = []
        z0 = z0[outer.contains(z0)]
        if z0.size == 0:
            break
        r2 = outer.boundary_distance(z0)
        r1 = np.array([np.max(np.abs(inner - p)) for p in z0])
        with np.errstate(divide="ignore"):
            val = np.where(r2 > r1, np.log(r2 / np.maximum(r1, _TINY)) / (2 * np.pi), 0.0)
        k = int(np.argmax(val))
        if val[k] > best.value:
            best = ModulusBound(float(val[k]), complex(z0[k]), float(r1[k]), float(r2[k]))
        hx, hy = (x1 - x0) / (grid - 1), (y1 - y0) / (grid - 1)
        cx, cy = best.centre.real, best.centre.imag
        x0, x1, y0, y1 = cx - 2 * hx, cx + 2 * hx, cy - 2 * hy, cy + 2 * hy
    return best


# -- SVG -------------------------------------------------------------------

def svg_document(curves, width=800, height=600, margin=20):
    """Minimal SVG with one polyline per (points, colour) pair, in map units."""
    allp = np.concatenate([np.asarray(p, complex) for p, _ in curves])
    x0, x1 = allp.real.min(), allp.real.max()
    y0, y1 = allp.imag.min(), allp.imag.max()
    s = min((width - 2 * margin) / max(x1 - x0, 1e-12), (height - 2 * margin) / max(y1 - y0, 1e-12))
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    for pts, colour in curves:
        pts = np.asarray(pts, complex)
        xs = margin + (pts.real - x0) * s
        ys = height - margin - (pts.imag - y0) * s
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1" points="{coords}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
