"""Central tolerance and sampling defaults."""
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    eq: float = 1e-12            # equality / classification tolerance
    fit_residual: float = 1e-10  # max residual accepted by fit_branch
    root: float = 1e-13          # bisection width for periodic endpoints
    tangency: float = 1e-10      # |R(x) - x| below this counts as a tangency
    grid: int = 4096             # scan grid for fixed points / monotonicity
    check_grid: int = 2048       # invariant grid for BranchRep / LorenzMap
    newton_residual: float = 1e-11

    def with_(self, **kw):
        return replace(self, **kw)


DEFAULT = Tolerances()
