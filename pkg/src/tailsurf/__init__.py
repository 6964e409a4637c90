"""tailsurf: exact flows and cylinder decompositions on tails of squares.

The surface is a row of shrinking squares (side ratio r) with roofs glued to
bases and exposed right-edge bands glued to the y-axis.  For r = 1/q the
flow of slope q/(2q-1) decomposes the surface into infinitely many cylinders
framed by saddle-connection chains, with one extra connection, the rigid
spine, that belongs to no cylinder; the strictly growing cylinder moduli
rule out any parabolic self-map preserving the decomposition.  Everything is
computed in exact rational arithmetic and double-checked against closed
forms.
"""

from .exact import Rational, format_rational, length_squared, mod_one, parse_rational, rat
from .surface import Event, Tail, harmonic_area_partial
from .flow import (
    BUDGET_EXHAUSTED,
    CLOSED,
    SINGULAR_HIT,
    Trajectory,
    first_return,
    next_event,
    saddle_connection,
    section_hits,
    trace,
)
from .iet import (
    CircleRotation,
    InGapError,
    PiecewiseTranslation,
    build_tk,
    fusion_ladder_base,
    fusion_ladder,
    fusion_orbit_length,
    orbit_until,
)
from .cylinders import (
    AxisDecomposition,
    Cylinder,
    Decomposition,
    SaddleChain,
    build_axis_decompositions,
    build_bsc,
    build_bsc1,
    build_bsc_prime,
    build_cyl,
    build_S1_S2,
    build_top1,
    crossing_counts,
    decompose,
    f_r,
    fill_in,
    fill_in_orbits,
    generation_zone_contains,
    horizontal_decomposition,
    no_parabolic,
    orthogonal_obstruction,
    spine_chain,
    vertical_decomposition,
)

__version__ = "0.1.0"
