"""Iteration of the renormalization operator and a fixed-point search.

Fixed-point search
------------------
A map is encoded as (c, u, v, H-, H+) with

    eta_-(t) = u * H-(t),              H-(0) = 1, H-(T-) = 0,
    eta_+(t) = v + (1 - v) * H+(t),    H+(0) = 0, H+(T+) = 1,

where H+- are Chebyshev series of fixed length.  The operator R has
expanding directions at its fixed points (two for the (01|10) class), so a
plain damped iteration is unstable in the (c, u, v) coordinates.  Each outer
step therefore solves the 3-dimensional equation (c, u, v)(R f) = (c, u, v)
by Newton's method with the shape (H-, H+) frozen, then replaces the shape by
the average of the old shape and the shape of R f.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import LorenzPermutation
from .errors import ClassificationError, LorenzError, NumericError, SearchFailure
from .maps import BranchRep, LorenzMap, RealBoundsReport, real_bounds_report
from .renorm import find_renormalization, renormalize

# stop reasons
COMPLETED = "completed"
NOT_RENORMALIZABLE = "not_renormalizable"
FILTER_VIOLATION = "filter_violation"
NUMERIC_FAILURE = "numeric_failure"


@dataclass(frozen=True)
class FlowLevel:
    level: int
    f: LorenzMap
    theta: LorenzPermutation = None     # combinatorics of the step leaving this level
    bounds: RealBoundsReport = None
    C_length: float = None
    dist_prev: float = None


@dataclass
class FlowRecord:
    levels: list = field(default_factory=list)
    stop_reason: str = COMPLETED
    message: str = ""

    @property
    def maps(self):
        return [lv.f for lv in self.levels]

    @property
    def distances(self):
        return [lv.dist_prev for lv in self.levels[1:]]

    def running_bounds(self):
        """Running min of delta_value and max of Delta_value over the levels."""
        d = np.minimum.accumulate([lv.bounds.delta_value for lv in self.levels])
        D = np.maximum.accumulate([lv.bounds.Delta_value for lv in self.levels])
        return d, D

    def write_csv(self, path):
        """One row per completed renormalization step, then a stop-reason comment."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "theta", "C_length", "c", "u", "v", "delta", "Delta",
                        "dist_prev"])
            for prev, lv in zip(self.levels, self.levels[1:]):
                f = lv.f
                w.writerow([lv.level, str(prev.theta), repr(prev.C_length), repr(f.c),
                            repr(f.crit_value_minus), repr(f.crit_value_plus),
                            repr(lv.bounds.delta_value), repr(lv.bounds.Delta_value),
                            repr(lv.dist_prev)])
            fh.write(f"# stop_reason={self.stop_reason}\n")


def iterate(f: LorenzMap, N: int, Theta=None, max_time=8, degree=40) -> FlowRecord:
    """Up to N renormalizations of f; stops early and records why."""
    if N < 1:
        raise ValueError("N must be at least 1")
    Theta = None if Theta is None else set(Theta)
    rec = FlowRecord()
    g, prev = f, None
    for k in range(N + 1):
        lv = dict(level=k, f=g, bounds=real_bounds_report(g),
                  dist_prev=None if prev is None else g.dist(prev))
        if k == N:
            rec.levels.append(FlowLevel(**lv))
            break
        try:
            step = find_renormalization(g, max_time)
        except ClassificationError as exc:
            step, msg = None, str(exc)
        else:
            msg = f"no renormalization with return times <= {max_time}"
        if step is None:
            rec.levels.append(FlowLevel(**lv))
            rec.stop_reason, rec.message = NOT_RENORMALIZABLE, msg
            return rec
        rec.levels.append(FlowLevel(**lv, theta=step.theta, C_length=step.q - step.p))
        if Theta is not None and step.theta not in Theta:
            rec.stop_reason = FILTER_VIOLATION
            rec.message = f"theta {step.theta} at level {k} is outside the filter"
            return rec
        try:
            prev, g = g, renormalize(g, step, degree=degree)
        except (NumericError, LorenzError, FloatingPointError) as exc:
            rec.stop_reason, rec.message = NUMERIC_FAILURE, str(exc)
            return rec
    return rec


# -- fixed points ----------------------------------------------------------

@dataclass(frozen=True)
class FixedPointConfig:
    degree: int = 40
    tol: float = 1e-6
    budget: int = 200
    newton_tol: float = 1e-13
    newton_steps: int = 8
    fd_step: float = 1e-7
    damping: float = 0.5
    scan_points: int = 41
    divergence_window: int = 10
    polish_depth: int = 6


@dataclass
class FixedPointResult:
    f: LorenzMap
    residual: float
    iterations: int
    trace: list


def _build(alpha, c, u, v, Hm, Hp):
    em = BranchRep(tuple(u * np.asarray(Hm)), c ** alpha)
    hp = np.asarray(Hp) * (1 - v)
    hp[0] += v
    ep = BranchRep(tuple(hp), (1 - c) ** alpha)
    return LorenzMap(alpha, c, em, ep)


def _decompose(g: LorenzMap, n):
    u, v = g.crit_value_minus, g.crit_value_plus
    Hm = np.array(g.eta_minus.coeffs) / u
    Hp = np.array(g.eta_plus.coeffs)
    Hp[0] -= v
    Hp /= 1 - v
    return np.array([g.c, u, v]), _pad(Hm, n), _pad(Hp, n)


def _pad(a, n):
    out = np.zeros(n)
    out[:min(n, len(a))] = a[:n]
    return out


class _Operator:
    def __init__(self, theta, alpha, cfg):
        self.theta, self.alpha, self.cfg = theta, alpha, cfg
        self.n = cfg.degree + 1

    def __call__(self, x, Hm, Hp):
        """(c, u, v) and shape of R f, or None if f leaves the target class."""
        try:
            f = _build(self.alpha, *x, Hm, Hp)
            step = find_renormalization(f, max(self.theta.times), times=self.theta.times)
            if step is None or step.theta != self.theta:
                return None
            g = renormalize(f, step, degree=self.cfg.degree)
        except (LorenzError, FloatingPointError, ValueError):
            return None
        return _decompose(g, self.n)

    def power(self, x, Hm, Hp, depth):
        """(c, u, v) of R^depth f, following the full maps."""
        out = (x, Hm, Hp)
        for _ in range(depth):
            out = self(*out)
            if out is None:
                return None
        return out


def _initial_guess(op: _Operator, scan_points):
    """Best standard-family start: the grid point whose image moves least."""
    best = None
    Hm = _pad([0.5, -0.5], op.n)
    Hp = _pad([0.5, 0.5], op.n)
    grid = np.linspace(0.02, 0.98, scan_points)
    for c in (0.5, 0.4, 0.6, 0.3, 0.7):
        for u in grid[grid > c]:
            for v in grid[grid < c]:
                x = np.array([c, u, v])
                out = op(x, Hm, Hp)
                if out is None:
                    continue
                d = np.max(np.abs(out[0] - x))
                if best is None or d < best[0]:
                    best = (d, x)
        if best is not None:
            break
    if best is None:
        raise SearchFailure(f"no standard-family map with combinatorics {op.theta}", [])
    return best[1], Hm, Hp


def _newton(op, x, Hm, Hp, cfg, depth=1):
    """Solve (c,u,v)(R^depth f) = (c,u,v) with frozen shape; backtracks to stay in class."""
    J = None
    # keep the perturbation in the linear regime after depth expansions
    h = cfg.fd_step * 10.0 ** (1 - depth) if depth > 1 else cfg.fd_step
    for _ in range(cfg.newton_steps):
        out = op.power(x, Hm, Hp, depth)
        if out is None:
            raise SearchFailure("Newton iterate left the combinatorial class", [])
        G = out[0] - x
        if np.max(np.abs(G)) < cfg.newton_tol:
            break
        J = np.empty((3, 3))
        for j in range(3):
            xx = x.copy()
            xx[j] += h
            oj = op.power(xx, Hm, Hp, depth)
            if oj is None:
                raise SearchFailure("finite difference left the combinatorial class", [])
            J[:, j] = (oj[0] - xx - G) / h
        dx = np.linalg.solve(J, G)
        lam = 1.0
        while lam > 1e-3:
            trial = x - lam * dx
            ot = op.power(trial, Hm, Hp, depth)
            if ot is not None and np.max(np.abs(ot[0] - trial)) < np.max(np.abs(G)):
                break
            lam /= 2
        x = x - lam * dx
    return x, J


def _polish(op, x, Hm, Hp, cfg, iterations, trace):
    """Retune (c, u, v) so that R^K f has the same (c, u, v) as f.

    Solving with depth K instead of 1 shrinks the error along the expanding
    directions by the K-th power of their eigenvalues, which keeps further
    renormalizations of the result close to it.
    """
    try:
        x, _ = _newton(op, x, Hm, Hp, cfg, depth=cfg.polish_depth)
    except SearchFailure as exc:
        raise SearchFailure(f"polish failed: {exc}", trace) from None
    out = op(x, Hm, Hp)
    if out is None:
        raise SearchFailure("polished map left the combinatorial class", trace)
    f = _build(op.alpha, *x, Hm, Hp)
    res = f.dist(_build(op.alpha, *out[0], out[1], out[2]))
    trace.append(dict(iteration="polish", c=x[0], u=x[1], v=x[2], residual=res, eigenvalues=None))
    if res > cfg.tol:
        return None
    return FixedPointResult(f, res, iterations, trace)


def fixed_point_search(theta_target: LorenzPermutation, alpha: float, budget: int = None,
                       cfg: FixedPointConfig = FixedPointConfig(), start=None):
    """Approximate fixed point of R with combinatorics theta_target.

    Returns a FixedPointResult with residual ||R f - f|| <= cfg.tol, or None
    when the budget runs out.  Raises SearchFailure on divergence.
    """
    if budget is not None:
        cfg = FixedPointConfig(**{**cfg.__dict__, "budget": budget})
    op = _Operator(theta_target, alpha, cfg)
    if start is None:
        x, Hm, Hp = _initial_guess(op, cfg.scan_points)
    else:
        x, Hm, Hp = _decompose(start, op.n)
    trace = []
    growth = 0
    for it in range(cfg.budget):
        try:
            x, J = _newton(op, x, Hm, Hp, cfg)
        except SearchFailure as exc:
            raise SearchFailure(str(exc), trace) from None
        out = op(x, Hm, Hp)
        if out is None:
            raise SearchFailure("map left the combinatorial class", trace)
        f = _build(alpha, *x, Hm, Hp)
        g = _build(alpha, *out[0], out[1], out[2])
        res = f.dist(g)
        trace.append(dict(iteration=it, c=x[0], u=x[1], v=x[2], residual=res,
                          eigenvalues=None if J is None else (np.linalg.eigvals(J) + 1).tolist()))
        if res <= cfg.tol:
            return _polish(op, x, Hm, Hp, cfg, it + 1, trace)
        growth = growth + 1 if len(trace) > 1 and res > trace[-2]["residual"] else 0
        if growth >= cfg.divergence_window:
            raise SearchFailure("residual grew for 10 consecutive steps", trace)
        w = cfg.damping
        Hm = w * Hm + (1 - w) * out[1]
        Hp = w * Hp + (1 - w) * out[2]
    return None


def stability_witness(f: LorenzMap, steps=5, max_time=8):
    """Residuals ||R^{k+1} f - R^k f|| for k = 0..steps."""
    rec = iterate(f, steps + 1, max_time=max_time)
    if rec.stop_reason != COMPLETED:
        raise NumericError(f"flow stopped: {rec.message}")
    return rec.distances
