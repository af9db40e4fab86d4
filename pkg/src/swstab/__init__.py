"""Stabilizability certificates and switching-signal synthesis for
discrete-time switched linear systems whose subsystems are all unstable.

The pipeline: find a Schur-stable two-subsystem product, measure the
scalar constants of the stability certificate, schedule switching as a
walk on a chain-plus-hub graph, and validate the result both empirically
(trajectories, product norms) and structurally (product decomposition and
exhaustive envelope checks).
"""

__version__ = "0.1.0"

from .certificate import (
    Certificate,
    CertificateInputs,
    certificate_lhs,
    check_certificate,
    compute_constants,
    max_certified_rate,
    rate_upper_limit,
    sweep_contraction_power,
)
from .family import MatrixFamily
from .graph import (
    SwitchGraph,
    SwitchingSignal,
    WalkGenerator,
    build_graph,
    generate_walk,
    max_stable_gap,
    signal_at,
    validate_walk,
    walk_to_signal,
)
from .instances import (
    InstanceParseError,
    generate_random_instance,
    parse_instance,
    write_instance,
)
from .linalg import (
    SCHUR_MARGIN,
    commutator,
    is_schur_stable,
    mat_mul,
    mat_power,
    operator_norm,
    schur_class,
    spectral_radius,
)
from .oracle import (
    BoundCheck,
    EnumerationCapExceeded,
    ProductDecomposition,
    basis_length,
    decompose_product,
    enumerate_walks,
    envelope_constant,
    envelope_constant_bound,
    exchange_identity_residual,
    exhaustive_bound_check,
)
from .search import (
    ContractionError,
    StableCombination,
    assert_all_unstable,
    compute_contraction,
    find_stable_combination,
)
from .simulate import (
    DecayFit,
    GesCheck,
    Trajectory,
    fit_decay,
    product_norms,
    simulate,
    verify_ges,
)

__all__ = [name for name in dir() if not name.startswith("_")]
