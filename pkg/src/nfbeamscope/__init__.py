"""Near-field beamfocusing patterns, sidelobe metrics and MU-MIMO sum rates
for linear, rectangular, circular and concentric-circular arrays."""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    ArrayKind,
    ArrayLayout,
    GeometrySpec,
    build_layout,
    direction,
    rayleigh_distance,
    reference_specs,
)
from .response import (  # noqa: E402
    FocusPoint,
    PatternTrace,
    SteeringVector,
    element_distance,
    gain_exact,
    steering_vector,
    trace_axial,
    trace_lateral,
)
from .closedform import (  # noqa: E402
    EffectiveRangeParams,
    closed_form_gain,
    effective_params,
    psll_location_ula,
    psll_vs_eta_sweep,
)
from .metrics import (  # noqa: E402
    SegmentationError,
    SidelobeReport,
    isll,
    lobe_inventory,
    psll,
    segment_mainlobe,
    sidelobe_report,
)
from .mumimo import (  # noqa: E402
    SumrateCurve,
    UserSet,
    interference,
    monte_carlo_sumrate,
    user_rate,
)
