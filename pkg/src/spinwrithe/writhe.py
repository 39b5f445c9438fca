"""Three independent writhe estimators.

- writhe_angular: the closed-form single integral (1/2pi) * int (1-cos
  theta) phi_s ds over the spin field; identical quadrature to the momentum,
  so Wr = P / (2 pi) holds to rounding.
- writhe_fuller: the local reference-curve formula, valid while the two
  tangent indicatrices stay non-antipodal (1 + n0.n bounded away from 0).
- writhe_gauss: the Gauss double integral over the reconstructed polyline,
  evaluated with the exact segment-pair solid-angle method used in DNA
  topology codes. This is the only estimator that sees self-crossings, and
  hence the only one that jumps by +-2 between topological sectors.

Mutual agreement of the three routes is the package's core correctness
evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .curvegeom import SpaceCurve
from .grid_field import SpinField, to_unit_vectors
from .observables import _deriv as _obs_deriv
from .observables import momentum

TWO_PI = 2.0 * np.pi

# Fuller's formula degenerates when the tangents become antipodal; this is
# the default floor on the denominator 1 + n0.n.
DEFAULT_DELTA_FULLER = 1e-6


class FullerHypothesisError(ValueError):
    """Raised when the tangent indicatrices pass through antipodal points."""


@dataclass(frozen=True)
class FullerCheck:
    ok: bool
    min_denominator: float
    s_at_min: float


@dataclass(frozen=True)
class WritheReport:
    gauss: float
    fuller: float
    angular: float
    fuller_hypothesis_ok: bool
    n_used: int


def writhe_angular(field: SpinField) -> float:
    """Wr = P / (2 pi), with P from the shared trapezoid quadrature."""
    return momentum(field) / TWO_PI


def fuller_validity_check(
    field: SpinField,
    reference: SpinField,
    delta: float = DEFAULT_DELTA_FULLER,
) -> FullerCheck:
    """Check 1 + n0.n > delta everywhere; report the minimum and where."""
    if field.grid != reference.grid:
        raise ValueError("field and reference must share a grid")
    denom = 1.0 + np.sum(
        to_unit_vectors(reference) * to_unit_vectors(field), axis=1
    )
    i = int(np.argmin(denom))
    return FullerCheck(
        ok=bool(denom[i] > delta),
        min_denominator=float(denom[i]),
        s_at_min=float(field.grid.s[i]),
    )


def _angle_derivative_vectors(field: SpinField) -> np.ndarray:
    """dn/ds via the chain rule through (theta, phi) finite differences.

    Differentiating the angles (centered interior, one-sided ends) and
    pushing through the sphere parametrization keeps the Fuller integrand
    algebraically reducible to the angular integrand when the reference is
    the straight line, so the identity chain closes at rounding level.
    """
    h = field.grid.h
    th, ph = field.theta, field.phi
    dth = _obs_deriv(th, h)
    dph = _obs_deriv(ph, h)
    st, ct = np.sin(th), np.cos(th)
    sp, cp = np.sin(ph), np.cos(ph)
    return np.column_stack(
        (
            dth * ct * cp - st * sp * dph,
            dth * ct * sp + st * cp * dph,
            -dth * st,
        )
    )


def writhe_fuller(
    field: SpinField,
    reference: SpinField,
    wr0: float = 0.0,
    delta: float = DEFAULT_DELTA_FULLER,
) -> float:
    """Writhe via the local reference-curve formula.

    Returns wr0 + (1/2pi) * int [n0 x n . d/ds(n0 + n)] / (1 + n0.n) ds,
    where n0 is the reference field's tangent. wr0 is the caller-supplied
    writhe of the reference; the default 0 is exact for the straight-line
    (ground state) reference.
    """
    check = fuller_validity_check(field, reference, delta)
    if not check.ok:
        raise FullerHypothesisError(
            f"1 + n0.n = {check.min_denominator:.3e} <= {delta:.1e} "
            f"at s = {check.s_at_min:.6g}"
        )
    n0 = to_unit_vectors(reference)
    n = to_unit_vectors(field)
    dsum = _angle_derivative_vectors(reference) + _angle_derivative_vectors(field)
    numer = np.sum(np.cross(n0, n) * dsum, axis=1)
    denom = 1.0 + np.sum(n0 * n, axis=1)
    integral = float(np.trapezoid(numer / denom, dx=field.grid.h))
    return wr0 + integral / TWO_PI


# ---------------------------------------------------------------------------
# Gauss double integral over a polyline
# ---------------------------------------------------------------------------

@numba.njit(cache=True)
def _tri_solid_angle(a, b, c):
    """Signed solid angle of the spherical triangle (a, b, c), unit inputs.

    Van Oosterom-Strackee: robust to all configurations via atan2, signed
    by the orientation of (a, b, c).
    """
    num = (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )
    den = (
        1.0
        + a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
        + b[0] * c[0] + b[1] * c[1] + b[2] * c[2]
        + c[0] * a[0] + c[1] * a[1] + c[2] * a[2]
    )
    return 2.0 * np.arctan2(num, den)


@numba.njit(cache=True)
def _unit(v):
    m = np.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    return v / m


@numba.njit(cache=True)
def _pair_solid_angle(p, i, j):
    """Signed writhe contribution (times 4 pi) of segment pair (i, j).

    Exact signed area of the spherical quadrilateral swept on the Gauss
    map by the two straight segments, as the sum of two van
    Oosterom-Strackee triangles.
    """
    e13 = _unit(p[j] - p[i])
    e14 = _unit(p[j + 1] - p[i])
    e23 = _unit(p[j] - p[i + 1])
    e24 = _unit(p[j + 1] - p[i + 1])
    # Gauss-map corners ordered so the signed area matches the convention
    # of the Gauss integral (right-handed crossing counts +1).
    return _tri_solid_angle(e13, e23, e24) + _tri_solid_angle(e13, e24, e14)


@numba.njit(cache=True, parallel=True)
def _writhe_row_sums(p, n_seg, closed):
    """Per-row compensated sums over segment pairs (i, j > i + 1).

    Rows are independent, so the numbers in row_sums do not depend on how
    threads split the prange; the caller combines them in index order,
    which makes the result bitwise reproducible across thread counts.
    """
    row_sums = np.zeros(n_seg)
    for i in numba.prange(n_seg):
        acc = 0.0
        comp = 0.0  # Kahan compensation
        j_end = n_seg
        if closed and i == 0:
            j_end = n_seg - 1  # wrap pair (0, last) shares a vertex
        for j in range(i + 2, j_end):
            term = _pair_solid_angle(p, i, j)
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        row_sums[i] = acc
    return row_sums


def writhe_gauss(curve: SpaceCurve, threads: int | None = None) -> float:
    """Gauss-integral writhe of a polyline via exact segment-pair terms.

    Open curves are accepted (the pair sum is well defined) but the value
    then depends on how the curve is closed at infinity; only closed-curve
    values are pinned by the package's cross-method tests.
    """
    p = np.ascontiguousarray(curve.points, dtype=float)
    if p.shape[0] < 4:
        raise ValueError("need at least 4 vertices")
    seg_len = np.linalg.norm(np.diff(p, axis=0), axis=1)
    if np.any(seg_len == 0.0):
        raise ValueError("degenerate (zero-length) segment")
    n_seg = p.shape[0] - 1
    if threads is not None:
        if threads < 1:
            raise ValueError("threads must be >= 1")
        # The fixed-order row combine makes the result independent of the
        # actual thread count, so oversubscribed requests are clamped to
        # what the runtime can provide rather than rejected.
        threads = min(threads, numba.config.NUMBA_NUM_THREADS)
        old = numba.get_num_threads()
        numba.set_num_threads(threads)
        try:
            rows = _writhe_row_sums(p, n_seg, curve.closed)
        finally:
            numba.set_num_threads(old)
    else:
        rows = _writhe_row_sums(p, n_seg, curve.closed)
    # Fixed-order compensated combination of the per-row partials.
    total = 0.0
    comp = 0.0
    for r in rows:
        y = r - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return 2.0 * total / (4.0 * np.pi)


def writhe_report(
    field: SpinField,
    reference: SpinField,
    curve: SpaceCurve,
    delta: float = DEFAULT_DELTA_FULLER,
) -> WritheReport:
    """All three estimators on one configuration."""
    check = fuller_validity_check(field, reference, delta)
    fuller = writhe_fuller(field, reference, delta=delta) if check.ok else np.nan
    return WritheReport(
        gauss=writhe_gauss(curve),
        fuller=fuller,
        angular=writhe_angular(field),
        fuller_hypothesis_ok=check.ok,
        n_used=field.grid.n,
    )
