"""LP solving contract used by the fractional branch-and-bound."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigError
from .highs import solve_highs
from .mps import export_mps, import_mps
from .problem import LpProblem, LpSolution, LpStatus
from .shellout import solve_shellout
from .simplex import solve_simplex

BACKENDS = ("bundled", "highs", "mps-shellout")


@dataclass(frozen=True)
class LpConfig:
    backend: str = "highs"
    tol_primal: float = 1e-9
    tol_dual: float = 1e-9
    max_iter: int | None = None
    bland_after: int = 50
    shell_command: str | None = None
    shell_timeout: float | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown LP backend {self.backend!r}; choose from {BACKENDS}")


def solve_lp(p: LpProblem, cfg: LpConfig | None = None) -> LpSolution:
    """Solve ``p`` with the backend selected in ``cfg``; deterministic per input."""
    cfg = cfg or LpConfig()
    if cfg.backend == "bundled":
        return solve_simplex(p, tol_primal=cfg.tol_primal, tol_dual=cfg.tol_dual,
                             max_iter=cfg.max_iter, bland_after=cfg.bland_after)
    if cfg.backend == "highs":
        return solve_highs(p, tol_primal=cfg.tol_primal, tol_dual=cfg.tol_dual,
                           max_iter=cfg.max_iter)
    return solve_shellout(p, cfg.shell_command, cfg.shell_timeout)


__all__ = [
    "BACKENDS", "LpConfig", "LpProblem", "LpSolution", "LpStatus", "export_mps",
    "import_mps", "solve_lp", "solve_highs", "solve_simplex", "solve_shellout",
]
