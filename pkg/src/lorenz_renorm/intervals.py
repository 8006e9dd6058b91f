"""Dynamical intervals attached to the prerenormalizations of a Lorenz map.

Everything lives in the coordinates of the original map f.  The n-th
prerenormalization on C_n+- is the composition of branches of f given by the
level-n word, so images of points are exact compositions and orbits under
pR^k f are obtained by applying the level-k words to interval endpoints.

Intervals are (left, right) float pairs.  Compact containment I in J is
reported as the smaller of the two gaps between their endpoints; a margin
must be strictly positive to count.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DepthError, DomainError
from .maps import MINUS, PLUS
from .renorm import Prerenormalization, apply_word

TOL = 1e-12


def margin(inner, outer):
    """Smallest gap of inner inside outer; positive iff inner is compactly inside."""
    return min(inner[0] - outer[0], outer[1] - inner[1])


def contains(outer, inner, tol=1e-10):
    return outer[0] - tol <= inner[0] and inner[1] <= outer[1] + tol


def length(iv):
    return iv[1] - iv[0]


def _image(f, word, iv):
    a, b = iv
    return (float(apply_word(f, word, a)), float(apply_word(f, word, b)))


def _side(f, iv):
    mid = 0.5 * (iv[0] + iv[1])
    return MINUS if mid < f.c else PLUS


def dyn_orbit(pr: Prerenormalization, k, start, until, max_steps=10_000):
    """Orbit of ``start`` under pR^k f strictly before its first return to C_until.

    The start interval itself is not included.
    """
    f = pr.f
    p, q = pr.C(until)
    out = []
    cur = start
    for _ in range(max_steps):
        cur = _image(f, pr.word(k, _side(f, cur)), cur)
        if cur[1] > p + TOL and cur[0] < q - TOL:
            return out
        out.append(cur)
    raise DomainError("orbit did not return")


@dataclass(frozen=True)
class LevelIntervals:
    n: int
    c: float
    C: tuple
    L_minus: tuple
    L_plus: tuple
    image_minus: tuple      # pR^n f_-(L_n-)
    image_plus: tuple
    S_minus: tuple
    S_plus: tuple
    Q_minus: tuple
    Q_plus: tuple
    A_minus: tuple = None   # components of pR^n f_+-(L_n+-) minus L_n+-, c in closure of A
    B_minus: tuple = None
    A_plus: tuple = None
    B_plus: tuple = None
    checks: dict = field(default_factory=dict)

    @property
    def C_minus(self):
        return (self.C[0], self.c)

    @property
    def C_plus(self):
        return (self.c, self.C[1])

    def rows(self):
        names = ["C", "C_minus", "C_plus", "L_minus", "L_plus", "image_minus", "image_plus",
                 "S_minus", "S_plus", "Q_minus", "Q_plus", "A_minus", "B_minus", "A_plus", "B_plus"]
        for name in names:
            iv = getattr(self, name)
            if iv is not None:
                yield self.n, name, iv[0], iv[1], iv[1] - iv[0]


def _homeo_ok(f, word, x):
    """Every intermediate image of x stays on the side prescribed by word."""
    c = f.c
    y = x
    for k, s in enumerate(word):
        if (s == MINUS and y > c) or (s == PLUS and y < c):
            return False
        y = float(f.branch(s, y))
    return True


def _extend(f, word, inside, outer):
    """Move from ``inside`` toward ``outer`` while word stays a homeomorphism."""
    if _homeo_ok(f, word, outer):
        return outer
    good, bad = inside, outer
    for _ in range(200):
        mid = 0.5 * (good + bad)
        if _homeo_ok(f, word, mid):
            good = mid
        else:
            bad = mid
        if abs(bad - good) <= TOL * 1e-3:
            break
    return good


def compute_level(f, pr: Prerenormalization, n) -> LevelIntervals:
    if pr.f is not f:
        raise DomainError("prerenormalization belongs to a different map")
    if n < 1:
        raise DomainError("levels start at 1")
    if pr.depth < n:
        raise DepthError(f"need {n} prerenormalizations, have {pr.depth}", pr.depth)
    c = f.c
    p, q = pr.C(n)
    wm, wp = pr.word(n, MINUS), pr.word(n, PLUS)

    lm = _extend(f, wm, p, 0.0)
    rp = _extend(f, wp, q, 1.0)
    L_minus, L_plus = (lm, c), (c, rp)
    img_m = (float(apply_word(f, wm, lm)), float(apply_word(f, wm, c)))
    img_p = (float(apply_word(f, wp, c)), float(apply_word(f, wp, rp)))

    orb_m = dyn_orbit(pr, n - 1, (p, c), n)
    orb_p = dyn_orbit(pr, n - 1, (c, q), n)
    right_of_c = [iv for iv in orb_m if iv[0] >= c - TOL]
    left_of_c = [iv for iv in orb_p if iv[1] <= c + TOL]
    if not right_of_c or not left_of_c:
        raise DomainError(f"level {n}: no orbit interval across c")
    S_minus = min(right_of_c, key=lambda iv: iv[0])
    S_plus = max(left_of_c, key=lambda iv: iv[1])
    Q_minus = (min(img_m[0], S_minus[0]), max(img_m[1], S_minus[1]))
    Q_plus = (min(img_p[0], S_plus[0]), max(img_p[1], S_plus[1]))

    checks = {
        "C_minus_strictly_in_L": lm < p,
        "C_plus_strictly_in_L": rp > q,
        "Q_minus_margin": margin((lm, q), Q_minus),       # L_n- u C_n+ in Q_n-
        "Q_plus_margin": margin((p, rp), Q_plus),         # L_n+ u C_n- in Q_n+
    }
    kw = {}
    if pr.depth >= n + 1:
        p1, q1 = pr.C(n + 1)
        A_minus, B_minus = (c, img_m[1]), (img_m[0], lm)
        A_plus, B_plus = (img_p[0], c), (rp, img_p[1])
        kw = dict(A_minus=A_minus, B_minus=B_minus, A_plus=A_plus, B_plus=B_plus)
        next_m = dyn_orbit(pr, n - 1, (p1, c), n)
        next_p = dyn_orbit(pr, n - 1, (c, q1), n)
        checks.update({
            "L_minus_in_image_margin": margin(L_minus, img_m),
            "L_plus_in_image_margin": margin(L_plus, img_p),
            "C_next_plus_in_A_minus": contains(A_minus, (c, q1)) and q1 < A_minus[1],
            "C_next_minus_in_A_plus": contains(A_plus, (p1, c)) and p1 > A_plus[0],
            "B_minus_has_orbit_interval": any(contains(B_minus, iv) for iv in next_p),
            "B_plus_has_orbit_interval": any(contains(B_plus, iv) for iv in next_m),
        })
        # each component of Q minus (L u C_opposite) holds an orbit interval
        for tag, Q, lo, hi, pool in (
            ("minus", Q_minus, lm, q, next_p + orb_m),
            ("plus", Q_plus, p, rp, next_m + orb_p),
        ):
            left_comp, right_comp = (Q[0], lo), (hi, Q[1])
            checks[f"Q_{tag}_left_component_hit"] = any(contains(left_comp, iv) for iv in pool)
            checks[f"Q_{tag}_right_component_hit"] = any(contains(right_comp, iv) for iv in pool)
    return LevelIntervals(n, c, (p, q), L_minus, L_plus, img_m, img_p, S_minus, S_plus,
                          Q_minus, Q_plus, checks=checks, **kw)


@dataclass(frozen=True)
class OrbitRecord:
    intervals: tuple
    core_map: tuple = None      # Q-orbits: index of the core member in the O-orbit

    def __len__(self):
        return len(self.intervals)

    @property
    def lengths(self):
        return np.array([b - a for a, b in self.intervals])


def _pullback_chain(f, word, Q):
    """Members f^k o f_s o (pR^n f_s)^{-1}(Q), k = 0..m-1 (the last one is Q)."""
    m = len(word)
    chain = [Q]
    cur = Q
    for k in range(m - 1, 0, -1):
        s = word[k]
        lo, hi = f.branch_range(s)
        if cur[0] < lo - TOL or cur[1] > hi + TOL:
            raise DomainError("Q-orbit pullback leaves the branch range")
        a = float(f.inverse_branch_real(s, max(cur[0], lo)))
        b = float(f.inverse_branch_real(s, min(cur[1], hi)))
        if (s == MINUS and b > f.c + TOL) or (s == PLUS and a < f.c - TOL):
            raise DomainError("Q-orbit pullback crosses c")
        cur = (a, b)
        chain.append(cur)
    return tuple(reversed(chain))


def compute_orbits(f, pr: Prerenormalization, n, level: LevelIntervals = None):
    """(O_minus, O_plus, Q_minus, Q_plus) orbit records at level n."""
    if level is None:
        level = compute_level(f, pr, n)
    c = f.c
    p, q = pr.C(n)
    out = []
    for side, start in ((MINUS, (p, c)), (PLUS, (c, q))):
        word = pr.word(n, side)
        members, cur = [], start
        for s in word:
            cur = (float(f.branch(s, cur[0])), float(f.branch(s, cur[1])))
            members.append(cur)
        out.append(OrbitRecord(tuple(members)))
    for side, Q in ((MINUS, level.Q_minus), (PLUS, level.Q_plus)):
        chain = _pullback_chain(f, pr.word(n, side), Q)
        out.append(OrbitRecord(chain, core_map=tuple(range(len(chain)))))
    return tuple(out)


def orbit_checks(O: OrbitRecord, Q: OrbitRecord, samples=100_000):
    """Core containment, no foreign O-members inside, overlap count, total length."""
    core_inside = all(
        Y[0] < O.intervals[j][0] and O.intervals[j][1] < Y[1]
        for Y, j in zip(Q.intervals, Q.core_map)
    )
    foreign = 0
    for k, Y in enumerate(Q.intervals):
        for j, I in enumerate(O.intervals):
            if j != Q.core_map[k] and Y[0] < I[0] - TOL and I[1] + TOL < Y[1]:
                foreign += 1
    x = (np.arange(samples) + 0.5) / samples
    count = np.zeros(samples, dtype=int)
    for a, b in Q.intervals:
        count += (x > a) & (x < b)
    iv = sorted(O.intervals)
    O_disjoint = all(iv[i][1] <= iv[i + 1][0] + 1e-10 for i in range(len(iv) - 1))
    return {
        "core_inside": core_inside,
        "foreign_members": foreign,
        "max_overlap": int(count.max()),
        "Q_total_length": float(Q.lengths.sum()),
        "O_total_length": float(O.lengths.sum()),
        "O_disjoint": O_disjoint,
    }


@dataclass(frozen=True)
class LengthReport:
    levels: tuple
    max_O: tuple
    max_Q: tuple
    rate_O: float
    rate_Q: float
    ratio_min: float
    ratio_max: float


def _rate(levels, values):
    """Geometric decay rate from a least-squares fit of log(values) against level."""
    slope = np.polyfit(np.asarray(levels, float), np.log(np.asarray(values, float)), 1)[0]
    return float(np.exp(slope))


def bounded_geometry_ratios(pr: Prerenormalization, k=0):
    """|I|/|J| for orbit intervals of C_{k+1} and C_{k+2} under pR^k f inside C_k+-.

    With k = 0 these are the orbits of C_1 and C_2 under f relative to
    [0, c] and [c, 1].
    """
    f = pr.f
    c = f.c
    a, b = pr.C(k)
    halves = {MINUS: (a, c), PLUS: (c, b)}
    ratios = []
    for j in (k + 1, k + 2):
        if pr.depth < j:
            raise DepthError(f"need depth {j}", pr.depth)
        p, q = pr.C(j)
        for start in ((p, c), (c, q)):
            for iv in [start] + dyn_orbit(pr, k, start, j):
                J = halves[_side(f, iv)]
                ratios.append(length(iv) / length(J))
    return np.array(ratios)


def length_statistics(f, pr: Prerenormalization, levels) -> LengthReport:
    levels = list(levels)
    if len(levels) < 2:
        raise DomainError("need at least two levels for a decay fit")
    max_O, max_Q = [], []
    for n in levels:
        Om, Op, Qm, Qp = compute_orbits(f, pr, n)
        max_O.append(max(Om.lengths.max(), Op.lengths.max()))
        max_Q.append(max(Qm.lengths.max(), Qp.lengths.max()))
    r = bounded_geometry_ratios(pr, 0)
    return LengthReport(tuple(levels), tuple(map(float, max_O)), tuple(map(float, max_Q)),
                        _rate(levels, max_O), _rate(levels, max_Q),
                        float(r.min()), float(r.max()))


def write_level_csv(path, levels):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["level", "name", "left", "right", "length"])
        for lv in levels:
            for row in lv.rows():
                w.writerow([row[0], row[1], repr(row[2]), repr(row[3]), repr(row[4])])
