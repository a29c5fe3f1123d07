"""Almost contact metric structures on Lie algebras given by structure constants."""

__version__ = "0.1.0"

from .lie_core import (  # noqa: E402
    LieAlgebra,
    Nonsingularity,
    Subspace,
    ad_matrix,
    bracket,
    center,
    is_nonsingular,
    is_two_step,
    jacobi_residual,
    lower_central_series,
    nilpotency_class,
)
from .metric_connection import (  # noqa: E402
    ConnectionTable,
    MetricLieAlgebra,
    center_perp,
    check_half_bracket,
    inner,
    is_ad_skew_adjoint,
    is_bi_invariant,
    levi_civita,
    nabla,
)
from .contact_structures import (  # noqa: E402
    AlmostContactStructure,
    ContactClass,
    check_center_constraints,
    check_cosymplectic_consequences,
    classify,
    nabla_phi,
    validate_almost_contact,
)
from .subalgebra_geometry import (  # noqa: E402
    SlantKind,
    Subalgebra,
    duality_residual,
    gauss_decompose,
    is_slant,
    operator_covariant_derivative,
    orthonormalize,
    phi_split,
    phi_split_normal,
    project,
    q_operator,
    weingarten,
    wirtinger_angle,
)
from .report import Check, CheckReport  # noqa: E402
