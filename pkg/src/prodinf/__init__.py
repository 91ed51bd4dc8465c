"""Exact influences on finite product spaces and their transport to the unit cube."""

from .boxes import (
    Box,
    BoxEvent,
    SlicedBoxEvent,
    add_null_slice,
    box_h_influence,
    box_influence,
    box_measure,
    line_nonconstancy,
    normalize,
)
from .hfunc import INDICATOR, QUAD, Indicator01, PiecewisePolynomial, QuadXOneMinusX
from .influence import (
    InfluenceReport,
    bkkkl_influence,
    h_influence,
    influence,
    influence_report,
    mc_influence,
)
from .kernels import BACKEND
from .space import (
    Event,
    FibreAssignment,
    GroundSpace,
    ProductSpace,
    enumerate_fibre_assignments,
    event_measure,
    fibre_measure,
)
from .transport import (
    CantorPoint,
    Transport,
    build_transport,
    check_fibre_preservation,
    push_event,
    verify_transport,
)

__version__ = "0.1.0"
