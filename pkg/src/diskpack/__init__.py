"""diskpack: maximum-area packing of disks (or even regular polygons)
centered at given points.

Radii r_i >= 0 are assigned to the points so that r_i + r_j never exceeds
the pairwise distance, maximizing the total covered area.  The package
provides an exact solver for collinear points, a perimeter-LP based
2^(d-1)-approximation, the trivial half-nearest-neighbour 2^d-approximation,
an approximation scheme with a tunable quality knob, an exact small-instance
oracle, and generators/verifiers for the hardness gadget layouts.
"""

from .errors import (
    CapExceededError,
    ConstructionError,
    DiskPackError,
    InfeasibleResultError,
    InvalidInputError,
    MalformedGraphError,
)
from .geometry import (
    FEASIBILITY_TOL,
    FeasibilityReport,
    Instance,
    Metric,
    NNTable,
    RadiusAssignment,
    distance,
    distance_matrix,
    is_feasible,
    nearest_neighbors,
    objective_area,
    objective_power,
    polygon_vertices,
    shape_constant,
    shrink_to_feasible,
    useful_constraints,
)

__all__ = [
    "CapExceededError",
    "ConstructionError",
    "DiskPackError",
    "FEASIBILITY_TOL",
    "FeasibilityReport",
    "InfeasibleResultError",
    "Instance",
    "InvalidInputError",
    "MalformedGraphError",
    "Metric",
    "NNTable",
    "RadiusAssignment",
    "distance",
    "distance_matrix",
    "is_feasible",
    "nearest_neighbors",
    "objective_area",
    "objective_power",
    "polygon_vertices",
    "shape_constant",
    "shrink_to_feasible",
    "useful_constraints",
]

__version__ = "0.1.0"
