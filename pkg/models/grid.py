"""Densities tabulated on a grid: trapezoid normalisation, CDF and inverse-CDF sampling."""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from errors.errors import ArgumentError, GridError

MIN_GRID = 4096


@dataclass(frozen=True)
class GridDensity:
    grid: np.ndarray
    density: np.ndarray  # integrates to 1 under the trapezoid rule

    @classmethod
    def from_values(cls, grid, values) -> "GridDensity":
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ArgumentError("grid and values must be matching 1-d arrays with at least 2 points")
        if np.any(np.diff(grid) <= 0):
            raise ArgumentError("grid must be strictly increasing")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ArgumentError("density values must be finite and nonnegative")
        mass = trapezoid(values, grid)
        if not mass > 0:
            raise GridError("density has no mass on the grid")
        return cls(grid=grid, density=values / mass)

    @classmethod
    def from_log_values(cls, grid, log_values) -> "GridDensity":
        log_values = np.asarray(log_values, dtype=float)
        top = np.max(log_values)
        if not np.isfinite(top):
            raise GridError("log density is -inf everywhere on the grid")
        return cls.from_values(grid, np.exp(log_values - top))

    @property
    def mass(self) -> float:
        return float(trapezoid(self.density, self.grid))

    def cell_masses(self) -> np.ndarray:
        return 0.5 * (self.density[1:] + self.density[:-1]) * np.diff(self.grid)

    def cdf_values(self) -> np.ndarray:
        values = cumulative_trapezoid(self.density, self.grid, initial=0.0)
        return values / values[-1]

    def cdf(self, x):
        return np.interp(x, self.grid, self.cdf_values(), left=0.0, right=1.0)

    def mean(self) -> float:
        return float(trapezoid(self.grid * self.density, self.grid))

    def sd(self) -> float:
        center = self.mean()
        return float(np.sqrt(trapezoid((self.grid - center) ** 2 * self.density, self.grid)))

    def mode(self) -> float:
        return float(self.grid[np.argmax(self.density)])

    def sample(self, size: int, stream: np.random.Generator) -> np.ndarray:
        """Inverse-CDF draws by linear interpolation of the tabulated CDF."""
        return np.interp(stream.random(size), self.cdf_values(), self.grid)

    def check_resolution(self, support_low: float = -np.inf, support_high: float = np.inf,
                         end_tolerance: float = 1e-6, max_cell: float = 0.1) -> None:
        """
        Raise GridError when the grid truncates mass or is too coarse.

        An end cell is only inspected when that grid end lies strictly inside the
        support; an end that coincides with a support bound may carry mass.
        """
        cells = self.cell_masses()
        if self.grid[0] > support_low and cells[0] > end_tolerance:
            raise GridError(f"grid truncates the lower tail: end-cell mass {cells[0]:.3e}")
        if self.grid[-1] < support_high and cells[-1] > end_tolerance:
            raise GridError(f"grid truncates the upper tail: end-cell mass {cells[-1]:.3e}")
        if cells.max() > max_cell:
            raise GridError(f"grid too coarse: one cell holds {cells.max():.3f} of the mass")


def centered_grid(center: float, half_width: float, size: int = MIN_GRID) -> np.ndarray:
    return np.linspace(center - half_width, center + half_width, size)
