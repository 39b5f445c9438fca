"""Homotopies between spin configurations and writhe-jump detection.

Smoothly deforming a configuration deforms its space curve; whenever one
region of the curve passes through another, the Gauss writhe of the closed
curve jumps by +-2 while the local (angular) writhe varies continuously.
Counting those jumps along a path is the package's sector diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvegeom import close_at_infinity, integrate_tangent, DEFAULT_RADIUS_FACTOR
from .grid_field import Grid, SpinField, from_unit_vectors, to_unit_vectors
from .writhe import writhe_angular, writhe_gauss

DEFAULT_JUMP_TOL = 0.1
CONTINUITY_TOL = 0.2

PATH_METHODS = ("gauss_closed", "angular")


class ResolutionError(ValueError):
    """A writhe step too large to be a single +-2 jump: refine the path."""


@dataclass(frozen=True)
class HomotopyPath:
    fields: list
    lam: np.ndarray


@dataclass(frozen=True)
class JumpEvent:
    lambda_lo: float
    lambda_hi: float
    delta_wr: float
    sign: int


def _slerp(na: np.ndarray, nb: np.ndarray, t: float) -> np.ndarray:
    """Per-node great-circle interpolation between unit-vector fields.

    Antipodal node pairs get a deterministic tie-break: the interpolation
    swings through the direction obtained by projecting +x (or +y when the
    node is along +-x) orthogonal to the start vector.
    """
    dot = np.clip(np.sum(na * nb, axis=1), -1.0, 1.0)
    omega = np.arccos(dot)
    out = np.empty_like(na)
    generic = np.sin(omega) > 1e-9
    so = np.sin(omega[generic])
    out[generic] = (
        (np.sin((1.0 - t) * omega[generic]) / so)[:, None] * na[generic]
        + (np.sin(t * omega[generic]) / so)[:, None] * nb[generic]
    )
    degen = ~generic
    if np.any(degen):
        aligned = degen & (dot > 0)
        out[aligned] = na[aligned]
        anti = degen & (dot <= 0)
        if np.any(anti):
            axis = np.tile(np.array([1.0, 0.0, 0.0]), (int(np.sum(anti)), 1))
            swap = np.abs(na[anti][:, 0]) > 0.9
            axis[swap] = np.array([0.0, 1.0, 0.0])
            perp = axis - np.sum(axis * na[anti], axis=1)[:, None] * na[anti]
            perp /= np.linalg.norm(perp, axis=1)[:, None]
            out[anti] = np.cos(t * np.pi) * na[anti] + np.sin(t * np.pi) * perp
    return out / np.linalg.norm(out, axis=1)[:, None]


def homotopy_path(a: SpinField, b: SpinField, steps: int) -> HomotopyPath:
    """Node-wise spherical interpolation from a to b in `steps` samples."""
    if a.grid != b.grid:
        raise ValueError("fields must share a grid")
    if steps < 2:
        raise ValueError(f"need steps >= 2, got {steps}")
    na, nb = to_unit_vectors(a), to_unit_vectors(b)
    lam = np.linspace(0.0, 1.0, steps)
    eps = max(a.eps_bc, b.eps_bc)
    fields = [a]
    for t in lam[1:-1]:
        fields.append(from_unit_vectors(a.grid, _slerp(na, nb, float(t)), eps_bc=eps))
    fields.append(b)
    return HomotopyPath(fields=fields, lam=lam)


def writhe_along_path(
    path: HomotopyPath,
    method: str = "gauss_closed",
    radius_factor: float = DEFAULT_RADIUS_FACTOR,
) -> np.ndarray:
    """Writhe at every sample of the path.

    gauss_closed closes each curve at infinity first and sees the +-2
    sector jumps; angular is the local formula and stays continuous.
    """
    if method not in PATH_METHODS:
        raise ValueError(f"method must be one of {PATH_METHODS}, got {method!r}")
    out = np.empty(len(path.fields))
    for k, f in enumerate(path.fields):
        if method == "angular":
            out[k] = writhe_angular(f)
        else:
            try:
                curve = close_at_infinity(integrate_tangent(f), radius_factor)
            except ValueError as exc:
                raise ValueError(
                    f"closure failed at lambda = {path.lam[k]:.6g}: {exc}"
                ) from exc
            out[k] = writhe_gauss(curve)
    return out


def detect_jumps(
    series: np.ndarray,
    lambdas: np.ndarray,
    jump_tol: float = DEFAULT_JUMP_TOL,
) -> list[JumpEvent]:
    """Flag consecutive steps whose writhe difference is a +-2 quantum.

    A step larger than 2 + jump_tol is not interpreted (it could hide
    several crossings) and raises ResolutionError instead.
    """
    series = np.asarray(series, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float)
    if series.shape != lambdas.shape or series.size < 2:
        raise ValueError("series and lambdas must have equal length >= 2")
    if not 0.0 < jump_tol < 1.0:
        raise ValueError(f"need jump_tol in (0, 1), got {jump_tol}")
    events = []
    for k, d in enumerate(np.diff(series)):
        mag = abs(d)
        if mag > 2.0 + jump_tol:
            raise ResolutionError(
                f"writhe step {d:.3f} between lambda {lambdas[k]:.6g} and "
                f"{lambdas[k + 1]:.6g} exceeds a single +-2 jump; "
                "insufficient lambda resolution"
            )
        if mag >= 2.0 - jump_tol:
            events.append(
                JumpEvent(
                    lambda_lo=float(lambdas[k]),
                    lambda_hi=float(lambdas[k + 1]),
                    delta_wr=float(d),
                    sign=1 if d > 0 else -1,
                )
            )
    return events


def sector_distance(
    a: SpinField,
    b: SpinField,
    steps: int,
    jump_tol: float = DEFAULT_JUMP_TOL,
    radius_factor: float = DEFAULT_RADIUS_FACTOR,
) -> int:
    """Number of writhe jumps along the default homotopy from a to b.

    Path-dependent: a diagnostic for how many crossings the default
    deformation makes, not a proven metric between sectors.
    """
    path = homotopy_path(a, b, steps)
    series = writhe_along_path(path, "gauss_closed", radius_factor)
    return len(detect_jumps(series, path.lam, jump_tol))


# ---------------------------------------------------------------------------
# Loop-passage fixture family
# ---------------------------------------------------------------------------

def loop_passage_family(
    steps: int = 400, mirror: bool = False, n: int = 512
) -> HomotopyPath:
    """Parametric family whose curve passes through itself exactly once.

    A coiled configuration (plateau tilt with 1.5 turns of phi winding)
    whose tilt amplitude sweeps through pi/2, flipping the coil's pitch;
    the two strands of the coil pass through each other at one parameter
    value. The sweep is concentrated by a sigmoid so that, at the default
    sampling, the +-2 Gauss-writhe jump lands inside a single step while
    the series stays smooth elsewhere. mirror=True negates phi, which
    flips the handedness and hence the sign of the jump.
    """
    grid = Grid(-30.0, 30.0, n)
    s = grid.s
    plateau = 0.5 * (np.tanh((s + 6.0) / 1.5) - np.tanh((s - 6.0) / 1.5))
    plateau /= plateau.max()
    phi = -3.0 * np.pi * 0.5 * (1.0 + np.tanh(s / 2.0))
    if mirror:
        phi = -phi
    lam = np.linspace(0.0, 1.0, steps)
    fields = []
    for t in lam:
        theta_m = 1.55 + 0.35 * np.tanh(45.0 * (t - 0.5)) / np.tanh(22.5)
        theta = np.clip(theta_m * plateau, 0.0, np.pi - 1e-3)
        fields.append(SpinField(grid, theta, phi.copy()))
    return HomotopyPath(fields=fields, lam=lam)
