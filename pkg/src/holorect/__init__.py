"""Rectangle-contour integration, boundary-only Cauchy formulas, discrete
winding numbers and quadtree covers for holomorphic functions."""

from .errors import HolorectError
from .funcspec import FunctionSpec, differentiate, parse
from .geometry import GridPartition, LoopPath, Partition, Rectangle, Segment, area, boundary_circuit, quarters
from .integrate import (
    IntegralResult,
    RefinementConfig,
    cauchy_sum,
    functional_integral,
    goursat_trace,
    rectangle_integral,
    rho,
    segment_integral,
)
from .formulas import cauchy_derivative, cauchy_value, derivative_continuity_modulus, series_coefficients
from .winding import (
    WindingResult,
    loop_product,
    loop_reverse,
    loop_shift,
    winding_number,
    winding_number_lifted,
    winding_sum,
)
from .cover import SquarePredicate, countable_cover, konig_finite_cover, segment_cover
from .roots import PreimageReport, count_preimages, local_degree, locate_preimages

__version__ = "0.1.0"
