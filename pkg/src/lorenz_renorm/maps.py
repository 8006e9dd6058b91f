"""Analytic Lorenz maps in the eta-representation.

A Lorenz map on [0, 1] with critical point ``c`` and exponent ``alpha`` is
stored through its two branch diffeomorphisms::

    f_-(x) = eta_minus((c - x) ** alpha),   0 <= x < c
    f_+(x) = eta_plus((x - c) ** alpha),    c <  x <= 1

Each ``eta`` is a Chebyshev series on ``[0, T]``.  Keeping the power law
outside the series means the order of the singularity at ``c`` is exact, and
the series only has to resolve the (analytic, univalent) diffeomorphism.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial import chebyshev as C

from .config import DEFAULT, Tolerances
from .errors import DomainError, FitError, SchemaError

MINUS, PLUS = "minus", "plus"


@dataclass(frozen=True)
class BranchRep:
    coeffs: tuple
    domain_len: float
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        if len(self.coeffs) < 2:
            raise DomainError("BranchRep needs at least two coefficients")
        if not np.all(np.isfinite(self.coeffs)):
            raise DomainError("non-finite Chebyshev coefficient")
        if not self.domain_len > 0:
            raise DomainError(f"domain_len must be positive, got {self.domain_len}")
        if self.check and not self.is_monotone():
            raise DomainError("branch is not univalent on its domain (derivative changes sign)")

    @cached_property
    def poly(self) -> Chebyshev:
        return Chebyshev(self.coeffs, domain=[0.0, self.domain_len])

    @cached_property
    def dpoly(self) -> Chebyshev:
        return self.poly.deriv()

    @cached_property
    def d2poly(self) -> Chebyshev:
        return self.poly.deriv(2)

    def __call__(self, t):
        return self.poly(t)

    def deriv(self, t, order=1):
        return (self.dpoly if order == 1 else self.d2poly)(t)

    def value_and_deriv(self, t):
        """eta(t) and eta'(t) in one Clenshaw pass (complex t allowed)."""
        T = self.domain_len
        s = 2.0 * np.asarray(t) / T - 1.0
        c = self.coeffs
        b1 = b2 = d1 = d2 = 0.0
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(len(c) - 1, 0, -1):
                b1, b2, d1, d2 = c[k] + 2 * s * b1 - b2, b1, 2 * b1 + 2 * s * d1 - d2, d1
            val = c[0] + s * b1 - b2
            der = b1 + s * d1 - d2
        return val, der * (2.0 / T)

    def grid(self, n=DEFAULT.check_grid):
        return np.linspace(0.0, self.domain_len, n)

    def is_monotone(self, n=DEFAULT.check_grid) -> bool:
        d = self.dpoly(self.grid(n))
        return bool(np.all(d > 0) or np.all(d < 0))

    def inverse(self, y, tol=1e-15):
        """Real inverse on [0, T] by safeguarded bisection; y must lie in the range."""
        y = np.asarray(y, dtype=float)
        lo = np.zeros_like(y)
        hi = np.full_like(y, self.domain_len)
        incr = self.dpoly(0.5 * self.domain_len) > 0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            above = (self.poly(mid) > y) == incr
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
            if np.all(hi - lo <= tol * self.domain_len):
                break
        return 0.5 * (lo + hi)

    def to_dict(self):
        return {"domain_len": self.domain_len, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, d, check=True):
        try:
            return cls(tuple(d["coeffs"]), float(d["domain_len"]), check=check)
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed branch record: {exc}") from exc


@dataclass(frozen=True)
class LorenzMap:
    alpha: float
    c: float
    eta_minus: BranchRep
    eta_plus: BranchRep
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if not self.alpha > 1:
            raise DomainError(f"critical exponent must exceed 1, got {self.alpha}")
        if not 0 < self.c < 1:
            raise DomainError(f"critical point must lie in (0, 1), got {self.c}")
        if not np.isclose(self.eta_minus.domain_len, self.c ** self.alpha, rtol=1e-12):
            raise DomainError("eta_minus must live on [0, c**alpha]")
        if not np.isclose(self.eta_plus.domain_len, (1 - self.c) ** self.alpha, rtol=1e-12):
            raise DomainError("eta_plus must live on [0, (1-c)**alpha]")
        if self.check:
            self.validate()

    def validate(self, tol=DEFAULT.eq):
        if abs(self.f_minus(0.0)) > tol or abs(self.f_plus(1.0) - 1.0) > tol:
            raise DomainError("endpoints must be fixed: f(0)=0, f(1)=1")
        if not (self.eta_minus.dpoly(self.eta_minus.grid()) < 0).all():
            raise DomainError("f_minus is not strictly increasing")
        if not (self.eta_plus.dpoly(self.eta_plus.grid()) > 0).all():
            raise DomainError("f_plus is not strictly increasing")
        if self.crit_value_minus > 1 + tol or self.crit_value_plus < -tol:
            raise DomainError("branches leave [0, 1]")

    # -- real evaluation -------------------------------------------------
    @property
    def crit_value_minus(self) -> float:
        return float(self.eta_minus(0.0))

    @property
    def crit_value_plus(self) -> float:
        return float(self.eta_plus(0.0))

    def f_minus(self, x):
        return self.eta_minus(np.abs(self.c - np.asarray(x, dtype=float)) ** self.alpha)

    def f_plus(self, x):
        return self.eta_plus(np.abs(np.asarray(x, dtype=float) - self.c) ** self.alpha)

    def branch(self, side, x):
        return self.f_minus(x) if side == MINUS else self.f_plus(x)

    def __call__(self, x):
        # x == c takes the left limit
        x = np.asarray(x, dtype=float)
        return np.where(x <= self.c, self.f_minus(x), self.f_plus(x))

    def inverse_branch_real(self, side, y):
        """Real inverse of one branch; y must lie in that branch's range."""
        if side == MINUS:
            t = self.eta_minus.inverse(y)
            return self.c - t ** (1.0 / self.alpha)
        t = self.eta_plus.inverse(y)
        return self.c + t ** (1.0 / self.alpha)

    def branch_range(self, side):
        if side == MINUS:
            return (float(self.f_minus(0.0)), self.crit_value_minus)
        return (self.crit_value_plus, float(self.f_plus(1.0)))

    def dist(self, other: "LorenzMap", n=512) -> float:
        """Grid C0 distance between branches, plus the critical point offset."""
        lo, hi = min(self.c, other.c), max(self.c, other.c)
        xm = np.linspace(0.0, lo, n)
        xp = np.linspace(hi, 1.0, n)
        dm = np.max(np.abs(self.f_minus(xm) - other.f_minus(xm)))
        dp = np.max(np.abs(self.f_plus(xp) - other.f_plus(xp)))
        return float(max(dm, dp, abs(self.c - other.c)))

    # -- serialisation ---------------------------------------------------
    def to_dict(self):
        return {
            "alpha": self.alpha,
            "c": self.c,
            "eta_minus": self.eta_minus.to_dict(),
            "eta_plus": self.eta_plus.to_dict(),
        }

    def to_json(self) -> str:
        # repr-based float formatting round-trips every double exactly
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d, check=True):
        missing = {"alpha", "c", "eta_minus", "eta_plus"} - set(d)
        if missing:
            raise SchemaError(f"map record is missing keys: {sorted(missing)}")
        return cls(
            float(d["alpha"]),
            float(d["c"]),
            BranchRep.from_dict(d["eta_minus"], check=check),
            BranchRep.from_dict(d["eta_plus"], check=check),
            check=check,
        )

    @classmethod
    def from_json(cls, text: str, check=True):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(d, dict):
            raise SchemaError("map record must be a JSON object")
        return cls.from_dict(d, check=check)


def standard_family(u, v, c, alpha) -> LorenzMap:
    """f_-(x) = u(1 - ((c-x)/c)^alpha),  f_+(x) = v + (1-v)((x-c)/(1-c))^alpha."""
    if not (0 < u < 1 and 0 < v < 1):
        raise DomainError(f"need 0 < u, v < 1, got u={u}, v={v}")
    if not 0 < c < 1:
        raise DomainError(f"need 0 < c < 1, got {c}")
    if not alpha > 1:
        raise DomainError(f"need alpha > 1, got {alpha}")
    # affine eta in the Chebyshev variable s = 2t/T - 1
    em = BranchRep((u / 2, -u / 2), c ** alpha)
    ep = BranchRep(((1 + v) / 2, (1 - v) / 2), (1 - c) ** alpha)
    return LorenzMap(float(alpha), float(c), em, ep)


def eval_branch(f: LorenzMap, side, z, deriv=False):
    """Evaluate a branch at complex z (slit plane relative to c).

    Uses the principal alpha-power of (c - z) for the left branch and of
    (z - c) for the right one, so real inputs on the wrong side of c sit on
    the branch cut and are rejected.
    """
    z = np.asarray(z, dtype=complex)
    w = (f.c - z) if side == MINUS else (z - f.c)
    on_cut = (w.imag == 0) & (w.real < 0)
    if np.any(on_cut):
        raise DomainError(f"point on the branch cut of the {side} branch")
    eta = f.eta_minus if side == MINUS else f.eta_plus
    t = w ** f.alpha
    if not deriv:
        return eta(t)
    val, de = eta.value_and_deriv(t)
    dw = -1.0 if side == MINUS else 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        d = de * f.alpha * w ** (f.alpha - 1) * dw
    return val, d


class Triviality(str, Enum):
    TRIVIAL = "trivial"
    WEAKLY_NONTRIVIAL = "weakly_nontrivial"
    NONTRIVIAL = "nontrivial"


def is_nontrivial(f: LorenzMap, tol=DEFAULT.eq) -> Triviality:
    u, v = f.crit_value_minus, f.crit_value_plus
    if u > f.c + tol and v < f.c - tol:
        return Triviality.NONTRIVIAL
    if u >= f.c - tol and v <= f.c + tol:
        return Triviality.WEAKLY_NONTRIVIAL
    return Triviality.TRIVIAL


@dataclass(frozen=True)
class RealBoundsReport:
    delta_value: float
    Delta_value: float
    K1: float
    K2: float

    def has_bounds(self, delta, Delta):
        return self.delta_value >= delta and self.Delta_value <= Delta


def real_bounds_report(f: LorenzMap, n=DEFAULT.check_grid) -> RealBoundsReport:
    dmax = 0.0
    d1_max, d1_min, d2_max = 0.0, np.inf, 0.0
    for eta in (f.eta_minus, f.eta_plus):
        t = eta.grid(n)
        d1 = np.abs(eta.deriv(t))
        d2 = np.abs(eta.deriv(t, 2))
        dmax = max(dmax, float(np.max(d2 / d1)))
        d1_max = max(d1_max, float(d1.max()))
        d1_min = min(d1_min, float(d1.min()))
        d2_max = max(d2_max, float(d2.max()))
    K1 = max(d1_max, 1.0 / d1_min)
    return RealBoundsReport(min(f.c, 1 - f.c), dmax, K1, d2_max)


def lobatto_nodes(n, T):
    """n Chebyshev extreme points of [0, T], endpoints included, increasing."""
    k = np.arange(n)
    return 0.5 * T * (1.0 - np.cos(np.pi * k / (n - 1)))


def fit_branch(samples, domain_len, degree, tol=DEFAULT.fit_residual, check=True) -> BranchRep:
    """Least-squares Chebyshev fit of degree ``degree`` through (x, y) samples.

    With more samples than coefficients the sample residual is a genuine
    accuracy check; a residual above ``tol`` raises FitError.
    """
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("samples must be a sequence of (x, y) pairs")
    x, y = pts[:, 0], pts[:, 1]
    if len(np.unique(x)) < degree + 1:
        raise DomainError(f"need at least {degree + 1} distinct nodes, got {len(np.unique(x))}")
    s = 2.0 * x / domain_len - 1.0
    coef = C.chebfit(s, y, degree)
    resid = float(np.max(np.abs(C.chebval(s, coef) - y)))
    if not resid <= tol:
        raise FitError(f"fit residual {resid:.3e} exceeds {tol:.1e}; increase the degree", resid)
    return BranchRep(tuple(_chop(coef)), domain_len, check=check)


def fit_function(func, domain_len, degree, tol=DEFAULT.fit_residual, check=True) -> BranchRep:
    """Fit ``func`` on [0, T] from 2*(degree+1) Lobatto samples."""
    t = lobatto_nodes(2 * (degree + 1), domain_len)
    return fit_branch(np.column_stack([t, func(t)]), domain_len, degree, tol=tol, check=check)


def _chop(coef, rel=1e-16):
    coef = np.asarray(coef, dtype=float)
    scale = np.max(np.abs(coef))
    keep = len(coef)
    while keep > 2 and abs(coef[keep - 1]) <= rel * scale:
        keep -= 1
    return coef[:keep]
