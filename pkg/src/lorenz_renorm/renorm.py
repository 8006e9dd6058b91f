"""Renormalization intervals, first-return maps and prerenormalizations.

Search strategy for the renormalization interval C = [p, q]: for every pair
of return times (m-, m+) up to ``max_time`` the endpoints must be periodic,
f^{m-}(p) = p and f^{m+}(q) = q, so all such points are located by a sign
scan plus bisection.  Each candidate endpoint is validated on its own side
(orbit of [p, c] or [c, q]) which yields an admissible window for the
opposite endpoint; pairs whose windows agree are valid renormalization
intervals.  Smallest total return time wins, ties go to the longest C.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .combinatorics import LorenzPermutation, extract_permutation
from .config import DEFAULT, Tolerances
from .errors import ClassificationError, DomainError, FitError, NumericError
from .maps import MINUS, PLUS, BranchRep, LorenzMap, Triviality, fit_function, is_nontrivial

CONTAIN_TOL = 1e-9


@dataclass(frozen=True)
class RenormalizationStep:
    m_minus: int
    m_plus: int
    C: tuple
    c: float
    orbit_minus: tuple  # f^k([p, c]), k = 1..m_minus
    orbit_plus: tuple   # f^k([c, q]), k = 1..m_plus
    word_minus: tuple   # branch used at each of the m_minus steps
    word_plus: tuple
    theta: LorenzPermutation
    min_gap: float = 0.0
    degenerate: bool = False

    @property
    def p(self):
        return self.C[0]

    @property
    def q(self):
        return self.C[1]

    @property
    def C_minus(self):
        return (self.C[0], self.c)

    @property
    def C_plus(self):
        return (self.c, self.C[1])

    def to_dict(self):
        return {
            "m_minus": self.m_minus,
            "m_plus": self.m_plus,
            "C": list(self.C),
            "orbit_minus": [list(i) for i in self.orbit_minus],
            "orbit_plus": [list(i) for i in self.orbit_plus],
            "theta": self.theta.to_dict(),
        }


def apply_word(f: LorenzMap, word, x):
    """Compose branches of f along ``word`` (first letter applied first)."""
    y = np.asarray(x, dtype=float)
    for side in word:
        y = f.branch(side, y)
    return y


def iterate_map(f: LorenzMap, x, m):
    y = np.asarray(x, dtype=float)
    for _ in range(m):
        y = f(y)
    return y


def _periodic_points(f, m, lo, hi, tol: Tolerances):
    """Fixed points of f^m in (lo, hi): sign scan, vectorised bisection, jump filter."""
    x = np.linspace(lo, hi, tol.grid + 2)[1:-1]
    g = iterate_map(f, x, m) - x
    idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) <= 0)[0]
    if idx.size == 0:
        return np.empty(0)
    a, b = x[idx], x[idx + 1]
    ga = g[idx]
    for _ in range(200):
        mid = 0.5 * (a + b)
        gm = iterate_map(f, mid, m) - mid
        left = np.sign(gm) == np.sign(ga)
        a = np.where(left, mid, a)
        ga = np.where(left, gm, ga)
        b = np.where(left, b, mid)
        if np.all(b - a <= tol.root):
            break
    r = 0.5 * (a + b)
    # sign changes across the discontinuities of f^m are not fixed points
    r = r[np.abs(iterate_map(f, r, m) - r) < 1e-9]
    return np.unique(np.round(r, 14))


def _side_of(interval, c, tol=CONTAIN_TOL):
    a, b = interval
    if b <= c + tol and a < c - tol:
        return MINUS
    if a >= c - tol and b > c + tol:
        return PLUS
    return None


def _interval_orbit(f, start, first_side, m):
    """Images of ``start`` under the first-return word; None if c is crossed."""
    c = f.c
    word = [first_side]
    cur = start
    images = []
    for k in range(1, m + 1):
        side = word[-1]
        cur = (float(f.branch(side, cur[0])), float(f.branch(side, cur[1])))
        images.append(cur)
        if k < m:
            nxt = _side_of(cur, c)
            if nxt is None:
                return None
            word.append(nxt)
    return images, tuple(word)


def _min_gap(intervals):
    iv = sorted(intervals)
    gaps = [iv[i + 1][0] - iv[i][1] for i in range(len(iv) - 1)]
    return min(gaps) if gaps else np.inf


def _left_candidate(f, p, m, tol):
    """Validate endpoint p of C_- = [p, c]; returns the admissible window for q."""
    c = f.c
    res = _interval_orbit(f, (p, c), MINUS, m)
    if res is None:
        return None
    images, word = res
    pre = [(p, c)] + images[:-1]
    qhi = f.crit_value_minus
    for a, b in images[:-1]:
        if b <= c + CONTAIN_TOL:
            if b > p + CONTAIN_TOL:
                return None
        else:
            qhi = min(qhi, a)
    ret = images[-1][1]
    if abs(images[-1][0] - p) > 1e-8 or ret < c - tol.eq:
        return None
    if _min_gap(pre) < -CONTAIN_TOL:
        return None
    xs = np.linspace(p, c, tol.grid + 2)[1:-1]
    g = apply_word(f, word, xs) - xs
    if np.any(g <= 0) or np.min(g[1:-1]) < tol.tangency:
        return None
    return dict(p=p, images=tuple(images), word=word, qlo=max(c, ret), qhi=qhi,
                gap=_min_gap(pre), ret=ret, pre=pre)


def _right_candidate(f, q, m, tol):
    c = f.c
    res = _interval_orbit(f, (c, q), PLUS, m)
    if res is None:
        return None
    images, word = res
    pre = [(c, q)] + images[:-1]
    plo = f.crit_value_plus
    for a, b in images[:-1]:
        if a >= c - CONTAIN_TOL:
            if a < q - CONTAIN_TOL:
                return None
        else:
            plo = max(plo, b)
    ret = images[-1][0]
    if abs(images[-1][1] - q) > 1e-8 or ret > c + tol.eq:
        return None
    if _min_gap(pre) < -CONTAIN_TOL:
        return None
    xs = np.linspace(c, q, tol.grid + 2)[1:-1]
    g = xs - apply_word(f, word, xs)
    if np.any(g <= 0) or np.min(g[1:-1]) < tol.tangency:
        return None
    return dict(q=q, images=tuple(images), word=word, plo=plo, phi=min(c, ret),
                gap=_min_gap(pre), ret=ret, pre=pre)


def find_renormalization(f: LorenzMap, max_time: int, times=None, tol: Tolerances = DEFAULT):
    """Renormalization step of f with return times at most ``max_time``, or None.

    ``times`` restricts the search to one (m_minus, m_plus) pair.
    """
    if max_time < 1:
        raise DomainError("max_time must be positive")
    cls = is_nontrivial(f, tol.eq)
    if cls != Triviality.NONTRIVIAL:
        raise ClassificationError(f"map is {cls.value}; renormalization needs a nontrivial map")
    u, v, c = f.crit_value_minus, f.crit_value_plus, f.c
    if times is not None:
        pairs = [tuple(times)] if max(times) <= max_time else []
    else:
        pairs = [(a, b) for a in range(1, max_time + 1) for b in range(1, max_time + 1)]
    pairs.sort(key=lambda t: (t[0] + t[1], t))
    needed_m = sorted({a for a, _ in pairs})
    needed_p = sorted({b for _, b in pairs})
    left, right = {}, {}
    try:
        for m in needed_m:
            pts = _periodic_points(f, m, v, c, tol)
            left[m] = [d for d in (_left_candidate(f, float(p), m, tol) for p in pts) if d]
        for m in needed_p:
            pts = _periodic_points(f, m, c, u, tol)
            right[m] = [d for d in (_right_candidate(f, float(q), m, tol) for q in pts) if d]
    except FloatingPointError as exc:  # pragma: no cover - defensive
        raise NumericError("root scan failed", error=str(exc)) from exc

    best = None
    for mm, mp in pairs:
        if best is not None and mm + mp > best[0]:
            break
        for L in left[mm]:
            for R in right[mp]:
                p, q = L["p"], R["q"]
                if not (L["qlo"] - CONTAIN_TOL <= q <= L["qhi"] + CONTAIN_TOL):
                    continue
                if not (R["plo"] - CONTAIN_TOL <= p <= R["phi"] + CONTAIN_TOL):
                    continue
                if not (v < p < c < q < u):
                    continue
                key = (mm + mp, -(q - p))
                if best is None or key < best[1]:
                    best = (mm + mp, key, mm, mp, L, R)
    if best is None:
        return None
    _, _, mm, mp, L, R = best
    theta = LorenzPermutation(extract_permutation(L["pre"]), extract_permutation(R["pre"]))
    degenerate = abs(L["ret"] - c) <= tol.eq or abs(R["ret"] - c) <= tol.eq
    return RenormalizationStep(
        mm, mp, (L["p"], R["q"]), c, L["images"], R["images"], L["word"], R["word"], theta,
        min_gap=float(min(L["gap"], R["gap"])), degenerate=degenerate,
    )


def first_return_time(f: LorenzMap, x, C, max_iter=10_000):
    """Exact simulated first-return time of each point of x to int(C)."""
    p, q = C
    y = np.asarray(x, dtype=float).copy()
    out = np.zeros(y.shape, dtype=int)
    alive = np.ones(y.shape, dtype=bool)
    for k in range(1, max_iter + 1):
        y[alive] = f(y[alive])
        hit = alive & (y > p) & (y < q)
        out[hit] = k
        alive &= ~hit
        if not alive.any():
            break
    out[alive] = -1
    return out


def direct_rescaled_return(f: LorenzMap, step: RenormalizationStep, y):
    """A o R_C o A^{-1} by plain iteration of f (independent of the refit)."""
    p, q = step.C
    x = p + (q - p) * np.asarray(y, dtype=float)
    left = x < f.c
    out = np.empty_like(x)
    out[left] = apply_word(f, step.word_minus, x[left])
    out[~left] = apply_word(f, step.word_plus, x[~left])
    return (out - p) / (q - p)


def renormalize(f: LorenzMap, step: RenormalizationStep, degree=40, max_degree=320,
                tol: Tolerances = DEFAULT) -> LorenzMap:
    """Rf = A o R_C o A^{-1}, re-expressed in eta form by Chebyshev refitting."""
    p, q = step.C
    L = q - p
    c_new = (f.c - p) / L
    scale = L ** f.alpha

    def eta_m(s):
        y = f.eta_minus(scale * s)
        return (apply_word(f, step.word_minus[1:], y) - p) / L

    def eta_p(s):
        y = f.eta_plus(scale * s)
        return (apply_word(f, step.word_plus[1:], y) - p) / L

    Tm, Tp = c_new ** f.alpha, (1 - c_new) ** f.alpha
    em = _fit_doubling(eta_m, Tm, degree, max_degree, tol)
    ep = _fit_doubling(eta_p, Tp, degree, max_degree, tol)
    em = _pin(em, 0.0)
    ep = _pin(ep, 1.0)
    return LorenzMap(f.alpha, c_new, em, ep)


def _fit_doubling(func, T, degree, max_degree, tol):
    d = degree
    while True:
        try:
            return fit_function(func, T, d, tol=tol.fit_residual)
        except FitError:
            if d * 2 > max_degree:
                raise
            d *= 2


def _pin(eta: BranchRep, target):
    """Force eta(T) = target exactly with a correction linear in t (eta(0) unchanged)."""
    delta = float(eta(eta.domain_len)) - target
    if abs(delta) > 1e-8:
        raise NumericError("rescaled endpoint is not fixed", endpoint_error=delta)
    coef = list(eta.coeffs)
    coef[0] -= delta / 2
    coef[1] -= delta / 2
    return BranchRep(tuple(coef), eta.domain_len)


@dataclass(frozen=True)
class Level:
    """One prerenormalization level, in the coordinates of the original map."""
    n: int
    C: tuple
    word_minus: tuple   # pR^n f_- as a composition of branches of f
    word_plus: tuple
    local_step: RenormalizationStep   # step found on R^{n-1} f
    renormalized: LorenzMap           # R^n f

    @property
    def m_minus(self):
        return len(self.word_minus)

    @property
    def m_plus(self):
        return len(self.word_plus)

    @property
    def theta(self):
        return self.local_step.theta

    @property
    def length(self):
        return self.C[1] - self.C[0]

    def word(self, side):
        return self.word_minus if side == MINUS else self.word_plus


@dataclass(frozen=True)
class Prerenormalization:
    f: LorenzMap
    levels: tuple = field(default=())

    @property
    def depth(self):
        return len(self.levels)

    def level(self, n) -> Level:
        if n == 0:
            raise DomainError("level 0 is the map itself")
        return self.levels[n - 1]

    def C(self, n):
        return (0.0, 1.0) if n == 0 else self.level(n).C

    def word(self, n, side):
        return (side,) if n == 0 else self.level(n).word(side)

    def step(self, n) -> RenormalizationStep:
        """Level n as a RenormalizationStep of f itself (composed return times)."""
        lv = self.level(n)
        f = self.f
        p, q = lv.C
        om = _images(f, (p, f.c), lv.word_minus)
        op = _images(f, (f.c, q), lv.word_plus)
        return RenormalizationStep(lv.m_minus, lv.m_plus, lv.C, f.c, om, op,
                                   lv.word_minus, lv.word_plus, lv.theta)


def _images(f, interval, word):
    out = []
    a, b = interval
    for s in word:
        a, b = float(f.branch(s, a)), float(f.branch(s, b))
        out.append((a, b))
    return tuple(out)


def _refine_periodic(f, word, x0, scale):
    """Re-solve word(x) = x near x0 in the original coordinates."""
    for width in (1e-7, 1e-5, 1e-3):
        a, b = x0 - width * scale, x0 + width * scale
        try:
            ga = float(apply_word(f, word, a)) - a
            gb = float(apply_word(f, word, b)) - b
        except Exception:  # pragma: no cover
            continue
        if ga * gb < 0:
            for _ in range(100):
                m = 0.5 * (a + b)
                gm = float(apply_word(f, word, m)) - m
                if np.sign(gm) == np.sign(ga):
                    a, ga = m, gm
                else:
                    b = m
                if b - a < 1e-16:
                    break
            return 0.5 * (a + b)
    return x0


def prerenormalize(f: LorenzMap, n: int, max_time: int, degree=40, times=None,
                   tol: Tolerances = DEFAULT):
    """First n prerenormalizations of f, or None if some level fails."""
    if n < 1:
        raise DomainError("n must be at least 1")
    levels = []
    g = f
    off, scl = 0.0, 1.0       # x_orig = off + scl * y
    words = {MINUS: (MINUS,), PLUS: (PLUS,)}
    for k in range(1, n + 1):
        try:
            step = find_renormalization(g, max_time, times=times, tol=tol)
        except ClassificationError:
            return None
        if step is None:
            return None
        new_words = {
            MINUS: tuple(s for letter in step.word_minus for s in words[letter]),
            PLUS: tuple(s for letter in step.word_plus for s in words[letter]),
        }
        p = off + scl * step.p
        q = off + scl * step.q
        if k > 1:
            p = _refine_periodic(f, new_words[MINUS], p, q - p)
            q = _refine_periodic(f, new_words[PLUS], q, q - p)
        g = renormalize(g, step, degree=degree, tol=tol)
        levels.append(Level(k, (p, q), new_words[MINUS], new_words[PLUS], step, g))
        words = new_words
        off, scl = off + scl * step.p, scl * (step.q - step.p)
    return Prerenormalization(f, tuple(levels))


def scaled_neighborhood_check(J, T, tau) -> bool:
    """True iff both components of T minus J have length at least tau*|T|."""
    (a, b), (s, t) = J, T
    if a < s or b > t or a > b:
        raise DomainError(f"{J} is not contained in {T}")
    gap = tau * (t - s)
    return (a - s) >= gap and (t - b) >= gap
