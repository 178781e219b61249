"""Spectra of weighted Laplacians on space forms and sharp-inequality checks.

The package computes Dirichlet and Neumann eigenvalues of the weighted
(Witten) Laplacian on geodesic balls in hyperbolic space, Euclidean space,
and the hemisphere, plus P1 finite-element spectra of arbitrary 2-D domains
in the same geometries, and uses them to verify Faber-Krahn,
Hong-Krahn-Szego, and Szego-Weinberger type inequalities for radial weights.
"""

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    HypothesesUnmetError,
    MeshError,
    QuadratureError,
    WittenlapError,
)
from .spaceform import (
    Curvature,
    SpaceFormModel,
    c_kappa,
    conformal_factor,
    geodesic_distance,
    geodesic_distance_to_origin,
    mobius_shift,
    s_kappa,
    space_form,
)
from .weights import (
    Admissibility,
    AdmissibilityVerdict,
    WeightProfile,
    builtin_profile,
    check_admissibility,
    parse_weight,
)
from .measure import (
    ball_weighted_boundary_area,
    ball_weighted_volume,
    mesh_weighted_volume,
    solve_radius,
    unit_sphere_area,
)
from .radial import (
    BoundaryCondition,
    NeumannBallSpectrumSummary,
    RadialEigenpair,
    RadialMode,
    ShootResult,
    eigenvalue,
    fd_oracle_eigenvalue,
    first_dirichlet,
    first_neumann,
    shoot,
    trial_h,
    wronskian_residual,
)
from .fem2d import (
    FemField,
    ShapeSpec,
    SpectrumResult,
    TriMesh,
    assemble,
    domain_spectrum,
    generate_mesh,
    load_mesh,
    nodal_domain_count,
    rayleigh_quotient,
    recenter_for_zero_mean,
    save_mesh,
    solve_spectrum,
)
from .rearrange import (
    DistributionFunction,
    RadialRearrangement,
    distribution,
    energy_comparison,
    export_profile_csv,
    l2_identity_residual,
    rearrange,
    volume_above,
)
from .harness import (
    ExperimentSpec,
    InequalityReport,
    Theorem,
    default_config_path,
    load_config,
    run_appendix_ordering,
    run_experiment,
    run_faber_krahn,
    run_faber_krahn_hemisphere,
    run_hks,
    run_suite,
    run_szego_weinberger,
)

__version__ = "0.1.0"
