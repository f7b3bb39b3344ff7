"""Special Kähler geometry of horizontal slices from a holomorphic prepotential.

The pipeline runs prepotential -> period vector -> Kähler potential and
Weil-Petersson metric -> Yukawa coupling -> curvature, all through truncated
power series (jets) evaluated exactly at a point.
"""

from .curvature import (
    CurvatureTensor,
    RicciTensor,
    kahler_curvature_generic,
    ricci_from_curvature,
    sectional_evaluators,
    strominger_curvature,
)
from .geometry import (
    MetricBundle,
    OutOfDomainError,
    SingularMetricError,
    covariant_derivative_yukawa,
    kahler_potential_and_metric,
    metric_bundle,
    p_and_hodge_metric,
    yukawa,
)
from .jets import (
    InsufficientOrderError,
    Jet,
    JetError,
    Prepotential,
    finite_difference_jet,
    jet_from_polynomial,
)
from .periods import (
    PeriodFrame,
    SymplecticForm,
    build_filtration,
    build_period_frame,
    check_hodge_riemann,
    check_horizontality,
    hodge_decomposition,
)
from .verify import (
    VerificationReport,
    cross_check_ricci,
    max_principle_bound,
    verify_theorem12,
    verify_yukawa_estimates,
)

__version__ = "0.1.0"
