"""Space curves whose unit tangent is the spin field, plus the closure
construction that turns an open configuration into a closed loop.

The closure replaces the paper-style "semi-circle at infinity" with a finite
planar return path: straight extensions along +z/-z from the two ends,
joined on the far side by two half-turn arcs and a straight run, all lying
in one plane and tangent-continuous at every junction. The return radius is
controlled by radius_factor and the writhe of the closed loop converges as
that factor grows.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .grid_field import SpinField, to_unit_vectors

Z_HAT = np.array([0.0, 0.0, 1.0])

# Boundary tangents must be this close to +z for closure to make sense.
CLOSURE_ALIGN_TOL = 1e-3

DEFAULT_RADIUS_FACTOR = 10.0


class ClosureError(ValueError):
    """Raised when a curve cannot be closed (already closed, or kinked ends)."""


@dataclass(frozen=True)
class SpaceCurve:
    """Polyline r(s) with unit tangents; open or closed."""

    points: np.ndarray
    tangents: np.ndarray
    closed: bool = False
    h: float | None = None

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        tangents = np.asarray(self.tangents, dtype=float)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "tangents", tangents)
        if points.ndim != 2 or points.shape[1] != 3 or points.shape[0] < 3:
            raise ValueError(f"points must be (m>=3, 3), got {points.shape}")
        if tangents.shape != points.shape:
            raise ValueError("tangents must match points in shape")
        norms = np.linalg.norm(tangents, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError("tangents must be unit vectors (within 1e-12)")
        if self.closed:
            gap = np.linalg.norm(points[0] - points[-1])
            if gap > 1e-9 * max(self.extent(), 1.0):
                raise ValueError(f"closed curve endpoints differ by {gap:.3e}")

    def extent(self) -> float:
        """Bounding-box diagonal; the curve's characteristic size."""
        return float(np.linalg.norm(self.points.max(axis=0) - self.points.min(axis=0)))


def integrate_tangent(field: SpinField) -> SpaceCurve:
    """Integrate the unit tangents into a curve starting at the origin.

    Midpoint rule per step: r_{i+1} = r_i + h * (n_i + n_{i+1}) / 2.
    Second order, and exact for a constant tangent (straight line).
    """
    n = to_unit_vectors(field)
    h = field.grid.h
    steps = 0.5 * h * (n[:-1] + n[1:])
    points = np.vstack((np.zeros(3), np.cumsum(steps, axis=0)))
    return SpaceCurve(points=points, tangents=n, closed=False, h=h)


def _arc(center, u, z_sign, radius, m):
    """Half-turn arc in the (u, z) plane around center; m interior+end points."""
    alpha = np.linspace(0.0, np.pi, m + 1)[1:]
    pts = (
        center[None, :]
        - radius * np.cos(alpha)[:, None] * u[None, :]
        + z_sign * radius * np.sin(alpha)[:, None] * Z_HAT[None, :]
    )
    tans = (
        radius * np.sin(alpha)[:, None] * u[None, :]
        + z_sign * radius * np.cos(alpha)[:, None] * Z_HAT[None, :]
    )
    tans /= np.linalg.norm(tans, axis=1)[:, None]
    return pts, tans


def _line(a, b, m):
    """m points strictly after a up to and including b, with unit tangents."""
    t = np.linspace(0.0, 1.0, m + 1)[1:]
    pts = a[None, :] + t[:, None] * (b - a)[None, :]
    tan = (b - a) / np.linalg.norm(b - a)
    return pts, np.tile(tan, (m, 1))


def close_at_infinity(
    curve: SpaceCurve, radius_factor: float = DEFAULT_RADIUS_FACTOR
) -> SpaceCurve:
    """Close an open curve through a large planar return path.

    From the last point the curve runs straight up (+z) a distance
    radius_factor * extent, turns through a half circle, comes back down a
    straight far-side run, turns through a second half circle, and runs
    straight up into the first point. The return path lies in the single
    plane containing +z and the ends' horizontal offset, so closing a
    straight segment yields an exactly planar loop.
    """
    if curve.closed:
        raise ClosureError("curve is already closed")
    if radius_factor <= 0:
        raise ValueError("radius_factor must be positive")
    t0, t1 = curve.tangents[0], curve.tangents[-1]
    for name, t in (("start", t0), ("end", t1)):
        miss = np.linalg.norm(t - Z_HAT)
        if miss > CLOSURE_ALIGN_TOL:
            raise ClosureError(
                f"{name} tangent deviates from +z by {miss:.3e} "
                f"(> {CLOSURE_ALIGN_TOL}); closure would kink"
            )
    p0, p1 = curve.points[0], curve.points[-1]
    extent = max(curve.extent(), 1e-12)
    L = radius_factor * extent

    top = p1 + L * Z_HAT  # A: far end of the up extension
    bot = p0 - L * Z_HAT  # B: far end of the down extension
    d_xy = np.array([top[0] - bot[0], top[1] - bot[1], 0.0])
    d = np.linalg.norm(d_xy)
    u = d_xy / d if d > 1e-12 * extent else np.array([1.0, 0.0, 0.0])
    # Far-side vertical run at horizontal distance clearance beyond A's xy.
    clearance = 0.5 * L
    r_top = 0.5 * clearance
    r_bot = 0.5 * (d + clearance)

    # The segment-pair writhe kernel is exact on straight segments, so the
    # return path only needs resolution on the arcs; a fixed angular
    # resolution there keeps the closure cost independent of radius_factor.
    m_arc = 256
    m_line = 16

    pieces_p = [curve.points]
    pieces_t = [curve.tangents]
    for pts, tans in (
        _line(p1, top, m_line),
        _arc(top + r_top * u, u, +1.0, r_top, m_arc),
        _line(top + 2 * r_top * u, bot + 2 * r_bot * u, m_line),
        _arc(bot + r_bot * u, -u, -1.0, r_bot, m_arc),
        _line(bot, p0, m_line),
    ):
        pieces_p.append(pts)
        pieces_t.append(tans)
    points = np.vstack(pieces_p)
    tangents = np.vstack(pieces_t)
    return SpaceCurve(points=points, tangents=tangents, closed=True, h=None)


def resample(curve: SpaceCurve, m: int) -> SpaceCurve:
    """Arc-length-uniform resampling to m vertices by linear interpolation."""
    if m < 3:
        raise ValueError(f"need m >= 3, got {m}")
    chord = np.linalg.norm(np.diff(curve.points, axis=0), axis=1)
    arclen = np.concatenate(([0.0], np.cumsum(chord)))
    target = np.linspace(0.0, arclen[-1], m)
    points = np.column_stack(
        [np.interp(target, arclen, curve.points[:, k]) for k in range(3)]
    )
    points[0] = curve.points[0]
    points[-1] = curve.points[-1]
    tangents = np.empty_like(points)
    tangents[1:-1] = points[2:] - points[:-2]
    if curve.closed:
        wrap = points[1] - points[-2]
        tangents[0] = wrap
        tangents[-1] = wrap
    else:
        tangents[0] = points[1] - points[0]
        tangents[-1] = points[-1] - points[-2]
    tangents /= np.linalg.norm(tangents, axis=1)[:, None]
    return SpaceCurve(points=points, tangents=tangents, closed=curve.closed, h=None)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def save_curve(curve: SpaceCurve, path) -> None:
    """CSV with header s,x,y,z,tx,ty,tz plus a JSON sidecar for metadata."""
    chord = np.linalg.norm(np.diff(curve.points, axis=0), axis=1)
    s = np.concatenate(([0.0], np.cumsum(chord)))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "x", "y", "z", "tx", "ty", "tz"])
        for si, p, t in zip(s, curve.points, curve.tangents):
            writer.writerow(
                [repr(float(si))]
                + [repr(float(v)) for v in p]
                + [repr(float(v)) for v in t]
            )
    sidecar = {"closed": curve.closed, "h": curve.h, "n_vertices": len(curve.points)}
    with open(str(path) + ".json", "w") as fh:
        json.dump(sidecar, fh)
        fh.write("\n")
