"""Discretized spin fields theta(s), phi(s) on a uniform 1D grid.

The chain lives on a finite interval standing in for the real line; all
generators enforce decay of theta at both ends so that energy and momentum
integrals are finite and the associated space curve straightens out at the
boundaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

# Default tolerance for the "theta vanishes at the ends" boundary condition.
DEFAULT_EPS_BC = 1e-6

# theta is kept strictly below pi by the random generator so the Fuller
# denominator 1 + n0.n never hits zero against the straight-line reference.
THETA_CLAMP_MARGIN = 1e-2


class BoundaryDecayError(ValueError):
    """Raised when a field does not decay to the ground state at the ends."""


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of the interval [s_min, s_max] with n nodes."""

    s_min: float
    s_max: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.s_min) and np.isfinite(self.s_max)):
            raise ValueError("grid bounds must be finite")
        if self.s_min >= self.s_max:
            raise ValueError(f"need s_min < s_max, got [{self.s_min}, {self.s_max}]")
        if self.n < 8:
            raise ValueError(f"need n >= 8, got {self.n}")

    @property
    def h(self) -> float:
        return (self.s_max - self.s_min) / (self.n - 1)

    @property
    def s(self) -> np.ndarray:
        return np.linspace(self.s_min, self.s_max, self.n)


@dataclass(frozen=True)
class SpinField:
    """Spin configuration in spherical angles on a Grid.

    theta is stored in [0, pi]; phi carries the full winding (it is never
    reduced mod 2*pi, because momentum and writhe integrate phi_s).
    """

    grid: Grid
    theta: np.ndarray
    phi: np.ndarray
    eps_bc: float = DEFAULT_EPS_BC
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)
        if theta.shape != (self.grid.n,) or phi.shape != (self.grid.n,):
            raise ValueError(
                f"theta/phi must have shape ({self.grid.n},), "
                f"got {theta.shape} and {phi.shape}"
            )
        if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(phi))):
            raise ValueError("theta/phi must be finite")
        if np.any(theta < -1e-15) or np.any(theta > np.pi + 1e-15):
            raise ValueError("theta out of [0, pi]")
        for end, value in (("s_min", theta[0]), ("s_max", theta[-1])):
            if value > self.eps_bc:
                raise BoundaryDecayError(
                    f"theta({end}) = {value:.3e} exceeds eps_bc = {self.eps_bc:.1e}; "
                    "grid too short for the requested profile"
                )


def ground_state(grid: Grid) -> SpinField:
    """All spins aligned with +z: theta = phi = 0."""
    zero = np.zeros(grid.n)
    return SpinField(grid, zero, zero.copy())


def twist_profile(
    grid: Grid,
    theta0: float,
    w: float,
    dphi: float,
    w_phi: float,
    s0: float,
    eps_bc: float = DEFAULT_EPS_BC,
) -> SpinField:
    """Localized tilt with a phi step: the standard smooth test family.

    theta(s) = theta0 * sech((s - s0)/w)
    phi(s)   = dphi * (1 + tanh((s - s0)/w_phi)) / 2

    Both are smooth with closed-form derivatives, so high-resolution
    quadrature oracles for the observables are cheap.
    """
    if not 0 < theta0 < np.pi:
        raise ValueError(f"need 0 < theta0 < pi, got {theta0}")
    if w <= 0 or w_phi <= 0:
        raise ValueError("widths must be positive")
    if not grid.s_min < s0 < grid.s_max:
        raise ValueError(f"s0 = {s0} outside ({grid.s_min}, {grid.s_max})")
    s = grid.s
    theta = theta0 / np.cosh((s - s0) / w)
    phi = dphi * (1.0 + np.tanh((s - s0) / w_phi)) / 2.0
    return SpinField(grid, theta, phi, eps_bc=eps_bc)


def _bump_envelope(grid: Grid) -> np.ndarray:
    """C-infinity bump on the grid interval, exactly zero at both end nodes."""
    u = (2.0 * grid.s - (grid.s_min + grid.s_max)) / (grid.s_max - grid.s_min)
    env = np.zeros(grid.n)
    inside = np.abs(u) < 1.0
    env[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return env


def random_field(
    grid: Grid, seed: int, modes: int = 8, amplitude: float = 0.5
) -> SpinField:
    """Band-limited random field: Fourier series times a compact bump.

    Deterministic for fixed (seed, modes, amplitude, grid). The envelope
    vanishes at the end nodes, so boundary decay holds by construction;
    theta is clamped into [0, pi - margin].
    """
    if modes < 1:
        raise ValueError(f"need modes >= 1, got {modes}")
    if amplitude < 0:
        raise ValueError("amplitude must be >= 0")
    rng = np.random.default_rng(seed)
    u = (grid.s - grid.s_min) / (grid.s_max - grid.s_min)  # in [0, 1]
    k = np.arange(1, modes + 1)[:, None]
    coeffs = rng.standard_normal((4, modes)) / np.sqrt(modes)
    basis_c = np.cos(np.pi * k * u)
    basis_s = np.sin(np.pi * k * u)
    f_theta = coeffs[0] @ basis_c + coeffs[1] @ basis_s
    f_phi = coeffs[2] @ basis_c + coeffs[3] @ basis_s
    env = _bump_envelope(grid)
    theta = np.clip(amplitude * env * np.abs(f_theta), 0.0, np.pi - THETA_CLAMP_MARGIN)
    phi = amplitude * env * f_phi
    return SpinField(grid, theta, phi)


def rescale(field: SpinField, lam: float) -> SpinField:
    """Homotety s -> lam*s: same samples on the stretched grid.

    Energy picks up a factor 1/lam; momentum and writhe integrate phi_s ds
    and are unchanged by the reparametrization.
    """
    if lam <= 0:
        raise ValueError(f"need lambda > 0, got {lam}")
    g = field.grid
    new_grid = Grid(lam * g.s_min, lam * g.s_max, g.n)
    return SpinField(
        new_grid, field.theta.copy(), field.phi.copy(), eps_bc=field.eps_bc
    )


def to_unit_vectors(field: SpinField) -> np.ndarray:
    """(n, 3) array of unit spin vectors: the tangent indicatrix samples."""
    st = np.sin(field.theta)
    return np.column_stack(
        (st * np.cos(field.phi), st * np.sin(field.phi), np.cos(field.theta))
    )


def from_unit_vectors(
    grid: Grid, n: np.ndarray, eps_bc: float = DEFAULT_EPS_BC
) -> SpinField:
    """Recover (theta, phi) from unit vectors, unwrapping phi along s."""
    n = np.asarray(n, dtype=float)
    theta = np.arccos(np.clip(n[:, 2], -1.0, 1.0))
    phi = np.unwrap(np.arctan2(n[:, 1], n[:, 0]))
    return SpinField(grid, theta, phi, eps_bc=eps_bc)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def field_to_dict(field: SpinField) -> dict:
    return {
        "grid": {"s_min": field.grid.s_min, "s_max": field.grid.s_max, "n": field.grid.n},
        "theta": field.theta.tolist(),
        "phi": field.phi.tolist(),
        "meta": dict(field.meta),
    }


def field_from_dict(doc: dict) -> SpinField:
    g = doc["grid"]
    grid = Grid(float(g["s_min"]), float(g["s_max"]), int(g["n"]))
    meta = doc.get("meta", {})
    eps_bc = float(meta.get("eps_bc", DEFAULT_EPS_BC))
    return SpinField(
        grid,
        np.array(doc["theta"], dtype=float),
        np.array(doc["phi"], dtype=float),
        eps_bc=eps_bc,
        meta=meta,
    )


def save_field(field: SpinField, path) -> None:
    with open(path, "w") as fh:
        json.dump(field_to_dict(field), fh)
        fh.write("\n")


def load_field(path) -> SpinField:
    with open(path) as fh:
        return field_from_dict(json.load(fh))
