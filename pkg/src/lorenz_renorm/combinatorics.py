"""Lorenz permutations: extraction, combinatorial sequences, realizability."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DepthError, DomainError


@dataclass(frozen=True)
class LorenzPermutation:
    """theta_minus[k] is the left-to-right rank of f^k(C_-) among its orbit (time -> rank)."""
    theta_minus: tuple
    theta_plus: tuple

    def __post_init__(self):
        for th in (self.theta_minus, self.theta_plus):
            if sorted(th) != list(range(len(th))):
                raise DomainError(f"{th} is not a permutation of 0..{len(th) - 1}")
        object.__setattr__(self, "theta_minus", tuple(int(k) for k in self.theta_minus))
        object.__setattr__(self, "theta_plus", tuple(int(k) for k in self.theta_plus))

    @property
    def times(self):
        return len(self.theta_minus), len(self.theta_plus)

    def words(self):
        """Branch sides visited by the orbits of C_- and C_+ before returning."""
        tm, tp = self.theta_minus, self.theta_plus
        wm = tuple("minus" if r <= tm[0] else "plus" for r in tm)
        wp = tuple("plus" if r >= tp[0] else "minus" for r in tp)
        return wm, wp

    def to_dict(self):
        return {"theta_minus": list(self.theta_minus), "theta_plus": list(self.theta_plus)}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["theta_minus"]), tuple(d["theta_plus"]))

    def __str__(self):
        return f"({''.join(map(str, self.theta_minus))}|{''.join(map(str, self.theta_plus))})"

    @classmethod
    def parse(cls, text):
        """Inverse of str() for return times below 11, e.g. "(01|10)"."""
        body = text.strip().strip("()")
        try:
            left, right = body.split("|")
            return cls(tuple(int(ch) for ch in left), tuple(int(ch) for ch in right))
        except ValueError as exc:
            raise DomainError(f"cannot parse permutation {text!r}") from exc


def extract_permutation(orbit, tol=1e-9):
    """Send time index k to the left-to-right rank of the k-th interval."""
    iv = [(float(a), float(b)) for a, b in orbit]
    order = sorted(range(len(iv)), key=lambda k: iv[k][0] + iv[k][1])
    for i, j in zip(order, order[1:]):
        if iv[i][1] > iv[j][0] + tol:
            raise DomainError(f"orbit intervals {iv[i]} and {iv[j]} overlap")
    rank = [0] * len(iv)
    for r, k in enumerate(order):
        rank[k] = r
    return tuple(rank)


@dataclass(frozen=True)
class CombinatorialSequence:
    thetas: tuple

    def __len__(self):
        return len(self.thetas)

    def __getitem__(self, k):
        return self.thetas[k]

    def to_list(self):
        return [t.to_dict() for t in self.thetas]


def rho(f, n, max_time, times=None):
    """(theta(f), theta(Rf), ..., theta(R^{n-1} f))."""
    from .renorm import find_renormalization, renormalize
    from .errors import ClassificationError

    thetas = []
    g = f
    for k in range(n):
        try:
            step = find_renormalization(g, max_time, times=times)
        except ClassificationError:
            step = None
        if step is None:
            raise DepthError(f"map is only {k} times renormalizable within max_time={max_time}", k)
        thetas.append(step.theta)
        if k < n - 1:
            g = renormalize(g, step)
    return CombinatorialSequence(tuple(thetas))


def in_S_Theta(f, n, Theta, max_time, times=None) -> bool:
    """Membership in S_Theta^n: n times renormalizable with every theta in Theta."""
    try:
        seq = rho(f, n, max_time, times=times)
    except DepthError:
        return False
    Theta = set(Theta)
    return all(t in Theta for t in seq.thetas)


# -- realizability oracle -------------------------------------------------
#
# A candidate theta is realized by a piecewise-linear Lorenz map built from
# the combinatorics alone.  Points are the endpoints of the orbit intervals
# of C_- and C_+ plus the two return values R(c-) and R(c+).  Two points on
# the same side of c compare like their images, so the order is obtained by
# following pairs forward until they land in C or on different sides.  The
# points are placed on a uniform grid (the two return values squeezed
# towards c), each endpoint is sent
# to the endpoint it must go to and the branches are linear in between.
# The resulting map is then checked from scratch in exact rational
# arithmetic: monotone branches, nontriviality, no fixed points except 0 and
# 1, first-return orbits of C_- and C_+, and a return map without interior
# fixed points.

class Inconclusive(Exception):
    """Oracle budget exceeded before a decision was reached."""


class _Reject(Exception):
    pass


_BUDGET_TIMES = 8
_SQUEEZE = (2, 4, 8, 16, 32, 64)
_INNER = ("p", "r'", "c", "r", "q")   # left-to-right inside C


def _labels(theta):
    wm, wp = theta.words()
    mt = {"m": len(wm), "p": len(wp)}
    words = {"m": wm, "p": wp}

    def canon(x):
        if x in (("m", 0, "R"), ("p", 0, "L")):
            return "c"
        if x == ("m", 0, "L"):
            return "p"
        if x == ("p", 0, "R"):
            return "q"
        return x

    def image(x):
        if x == "c":
            raise ValueError
        if x == "p":
            x = ("m", 0, "L")
        if x == "q":
            x = ("p", 0, "R")
        o, k, e = x
        if k + 1 < mt[o]:
            return canon((o, k + 1, e))
        if o == "m":
            return "p" if e == "L" else "r"
        return "r'" if e == "L" else "q"

    def side(x):
        if x in ("p", "r'"):
            return -1
        if x == "c":
            return 0
        if x in ("r", "q"):
            return 1
        return -1 if words[x[0]][x[1]] == "minus" else 1

    points = {canon((o, k, e)) for o in "mp" for k in range(mt[o]) for e in "LR"}
    points |= {"r", "r'"}
    return points, canon, image, side


def _cmp_factory(image, side):
    def cmp(x, y):
        if x == y:
            return 0
        sx, sy = side(x), side(y)
        if sx != sy:
            return -1 if sx < sy else 1
        ix, iy = x in _INNER, y in _INNER
        if ix and iy:
            return -1 if _INNER.index(x) < _INNER.index(y) else 1
        if ix or iy:
            # an orbit endpoint outside int C on the same side as a point of C
            outer_left = sx < 0
            if iy:
                return -1 if outer_left else 1
            return 1 if outer_left else -1
        fx, fy = image(x), image(y)
        if fx == fy:
            raise _Reject("two orbit endpoints coincide")
        return cmp(fx, fy)
    return cmp


def _build(theta, squeeze=2):
    from fractions import Fraction as F
    from functools import cmp_to_key

    points, canon, image, side = _labels(theta)
    cmp = _cmp_factory(image, side)
    order = sorted(points, key=cmp_to_key(cmp))
    for i in range(len(order) - 1):
        if cmp(order[i], order[i + 1]) != -1:
            raise _Reject("point order is not consistent")
    # r' and r sit at distance 1/squeeze of a grid step from c
    den = (len(order) - 1) * squeeze
    pos, k = {}, 0
    for i, x in enumerate(order):
        if x in ("r'", "c"):
            k += 1 if x == "c" else squeeze - 1
        elif x == "r":
            k += 1
        else:
            k += squeeze if i else 1
        pos[x] = F(k, den)
    c = pos["c"]
    wm, wp = theta.words()
    if wm[0] != "minus" or wp[0] != "plus":
        raise _Reject("C_- and C_+ must start on their own branches")
    left = [x for x in order if side(x) < 0 and x != "r'"]
    right = [x for x in order if side(x) > 0 and x != "r"]
    fm = _PL([F(0)] + [pos[x] for x in left] + [c],
             [F(0)] + [pos[image(x)] for x in left] + [pos[image(("m", 0, "R"))]])
    fp = _PL([c] + [pos[x] for x in right] + [F(1)],
             [pos[image(("p", 0, "L"))]] + [pos[image(x)] for x in right] + [F(1)])
    return c, fm, fp, pos["p"], pos["q"], den


class _PL:
    """Increasing piecewise-linear map through rational nodes."""

    def __init__(self, xs, ys):
        self.xs, self.ys = list(xs), list(ys)
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise _Reject("nodes out of order")
        if any(b <= a for a, b in zip(self.ys, self.ys[1:])):
            raise _Reject("branch is not increasing")

    def __call__(self, x):
        return self._interp(self.xs, self.ys, x)

    def inverse(self, y):
        return self._interp(self.ys, self.xs, y)

    @staticmethod
    def _interp(xs, ys, x):
        import bisect
        k = min(max(bisect.bisect_right(xs, x) - 1, 0), len(xs) - 2)
        x0, x1, y0, y1 = xs[k], xs[k + 1], ys[k], ys[k + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _check_orbits(theta, c, fm, fp, p, q):
    """Exact check that [p, q] is a renormalization interval of type theta."""
    u, v = fm(c), fp(c)
    if not (u > c > v) or fm.ys[-1] > 1 or fp.ys[0] < 0:
        return False
    # no fixed points of f besides 0 and 1 (f - id is linear between nodes)
    if any(y <= x for x, y in zip(fm.xs[1:], fm.ys[1:])):
        return False
    if any(y >= x for x, y in zip(fp.xs[:-1], fp.ys[:-1])):
        return False
    wm, wp = theta.words()
    if not (v < p < c < q < u):
        return False
    for start, word, target in (((p, c), wm, theta.theta_minus),
                                ((c, q), wp, theta.theta_plus)):
        orbit, cur, maps = [start], start, []
        breaks = []
        for k, s in enumerate(word):
            g = fm if s == "minus" else fp
            if (s == "minus" and cur[1] > c) or (s == "plus" and cur[0] < c):
                return False
            # kinks of the return map, pulled back to C_+-
            for x in g.xs:
                if cur[0] < x < cur[1]:
                    for h in reversed(maps):
                        x = h.inverse(x)
                    breaks.append(x)
            maps.append(g)
            cur = (g(cur[0]), g(cur[1]))
            if k + 1 < len(word):
                if cur[1] > p and cur[0] < q:
                    return False
                orbit.append(cur)
        if not (p <= cur[0] and cur[1] <= q):
            return False

        def ret(x):
            for h in maps:
                x = h(x)
            return x
        # R - id is linear between kinks: check sign at the kinks and the free end
        if word[0] == "minus":
            if not (ret(p) == p and ret(c) >= c):
                return False
            if any(ret(x) <= x for x in breaks + [c]) and ret(c) != c:
                return False
            if ret(c) == c and any(ret(x) <= x for x in breaks):
                return False
        else:
            if not (ret(q) == q and ret(c) <= c):
                return False
            if any(ret(x) >= x for x in breaks + [c]) and ret(c) != c:
                return False
            if ret(c) == c and any(ret(x) >= x for x in breaks):
                return False
        iv = sorted(orbit)
        if any(iv[i][1] > iv[i + 1][0] for i in range(len(iv) - 1)):
            return False
        if extract_permutation([(float(a), float(b)) for a, b in orbit], tol=0.0) != tuple(target):
            return False
    return True


def realize(theta: LorenzPermutation, budget_times=_BUDGET_TIMES):
    """Exact PL witness (c, f_-, f_+) for theta, or None if theta is not realizable.

    The ambient map is required to have no fixed points besides 0 and 1,
    which excludes the (1,1) return where f itself is the return map.
    """
    if max(theta.times) > budget_times:
        raise Inconclusive(f"return times {theta.times} exceed the oracle budget {budget_times}")
    for squeeze in _SQUEEZE:
        try:
            c, fm, fp, p, q, den = _build(theta, squeeze)
        except _Reject:
            return None
        if _check_orbits(theta, c, fm, fp, p, q):
            return c, fm, fp
    return None


def is_lorenz_permutation(theta: LorenzPermutation, budget_times=_BUDGET_TIMES) -> bool:
    """Realizability of theta by an exactly verified piecewise-linear Lorenz map."""
    return realize(theta, budget_times) is not None
