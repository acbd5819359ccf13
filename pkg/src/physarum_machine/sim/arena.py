"""Arena fields: chemoattractant diffusion and illumination."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import ConfigError, SimParams


@dataclass
class Arena:
    width: int
    height: int
    cell_size: float = 0.5  # mm
    dt: float = 1.0         # s
    chemo: np.ndarray = field(default=None)  # indexed [y, x], units >= 0
    light: np.ndarray = field(default=None)  # indexed [y, x], in [0, 1]

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ConfigError("arena dimensions must be >= 1")
        if self.chemo is None:
            self.chemo = np.zeros((self.height, self.width))
        if self.light is None:
            self.light = np.zeros((self.height, self.width))

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def chemo_at(self, x: float, y: float) -> float:
        xi = min(max(int(x), 0), self.width - 1)
        yi = min(max(int(y), 0), self.height - 1)
        return float(self.chemo[yi, xi])

    def light_at(self, x: float, y: float) -> float:
        xi = min(max(int(x), 0), self.width - 1)
        yi = min(max(int(y), 0), self.height - 1)
        return float(self.light[yi, xi])


def make_steady_solver(width: int, height: int, params: SimParams):
    """Factorized solver for the fixed point of field_step.

    The steady field of a source layout s solves
    (lam*I - (1-lam)*kappa*L) c = s with the same no-flux Laplacian L the
    per-tick update uses (lam is the per-tick decay fraction).  One
    factorization serves any number of right-hand sides, so each flake's
    individual plume is cheap to obtain.  Requires decay > 0.
    """
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    lam = params.decay * params.dt
    if lam <= 0:
        raise ConfigError("steady-state plumes need decay > 0")

    def lap1d(n: int) -> "sp.spmatrix":
        if n == 1:
            return sp.csr_matrix((1, 1))
        main = -2.0 * np.ones(n)
        main[0] = main[-1] = -1.0  # no-flux ends
        return sp.diags([np.ones(n - 1), main, np.ones(n - 1)], [-1, 0, 1])

    lap = sp.kronsum(lap1d(width), lap1d(height))  # flattened [y, x] order
    a = lam * sp.identity(width * height) - (1.0 - lam) * params.kappa * lap
    lu = spla.splu(a.tocsc())

    def solve(source: np.ndarray) -> np.ndarray:
        c = lu.solve(source.ravel())
        return np.maximum(c.reshape(height, width), 0.0)

    return solve


def flake_plume(solve, arena: Arena, x: int, y: int, color: str,
                params: SimParams) -> np.ndarray:
    source = np.zeros((arena.height, arena.width))
    source[y, x] = params.source_rate * params.attract_for(color) * params.dt
    return solve(source)


def field_step(arena: Arena, flakes, params: SimParams) -> None:
    """One tick of chemoattractant dynamics, in place.

    Diffusion uses a flux form with no-flow boundaries, so it conserves mass
    exactly; then decay scales everything down, and every non-exhausted flake
    injects source strength scaled by its color attraction.
    """
    c = arena.chemo
    lap = np.zeros_like(c)
    lap[1:, :] += c[:-1, :] - c[1:, :]
    lap[:-1, :] += c[1:, :] - c[:-1, :]
    lap[:, 1:] += c[:, :-1] - c[:, 1:]
    lap[:, :-1] += c[:, 1:] - c[:, :-1]
    c += params.kappa * lap
    c *= 1.0 - params.decay * params.dt
    for flake in flakes:
        if flake.mass > 0:
            c[flake.y, flake.x] += params.source_rate * params.attract_for(flake.color) * params.dt
    np.maximum(c, 0.0, out=c)
