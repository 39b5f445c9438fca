"""Spin chains as space curves: writhe, conservation, and sector jumps."""

from .grid_field import (
    Grid,
    SpinField,
    ground_state,
    twist_profile,
    random_field,
    rescale,
    to_unit_vectors,
)
from .curvegeom import SpaceCurve, integrate_tangent, close_at_infinity, resample
from .writhe import (
    WritheReport,
    writhe_angular,
    writhe_fuller,
    writhe_gauss,
    fuller_validity_check,
)
from .observables import (
    Observables,
    BoundReport,
    energy,
    momentum,
    magnetization,
    energy_bound_check,
)
from .dynamics import DynamicsTrace, DriftReport, ll_rhs, step, evolve, drift_report
from .topology import (
    HomotopyPath,
    JumpEvent,
    homotopy_path,
    writhe_along_path,
    detect_jumps,
    sector_distance,
    loop_passage_family,
)

__version__ = "0.1.0"
