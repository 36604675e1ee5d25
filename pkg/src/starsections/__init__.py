"""Star bodies in constant-curvature spaces: volumes, hyperplane-section
functionals, and numerical verification of their sharp inequalities."""

from .spaces import (
    SpaceSpec,
    euclidean_space,
    hemisphere_space,
    hyperbolic_space,
    metric_sine,
    phi,
    phi_inverse,
    ball_model_radius,
    geodesic_radius,
    gnomonic_radial,
    sphere_surface_area,
    unit_ball_volume,
)
from .quadrature import SphereRule, SubsphereRule, build_sphere_rule, subsphere_rule, integrate_radial
from .harmonics import (
    ZonalHarmonic,
    MultiplierTable,
    zonal_harmonic,
    eval_zonal,
    radon_multiplier,
    radon_quadrature,
    radon_l2_bound_check,
    multiplier_table,
)
from .bodies import (
    StarBody,
    ConeBase,
    BandsBase,
    ArcsBase,
    cap_base,
    double_cap_base,
    equality_cone_base,
    full_sphere_base,
    make_ball,
    make_bumpy_ball,
    make_cone,
    make_ellipsoid,
    make_lune,
    make_perturbed_ball,
    make_striped_cone,
    make_symmetric_polygon_body,
    make_vanishing_body,
    striped_cap_subset,
    section_bound_margin,
    is_convex_spherical,
    inverse_angular_area,
    AngularRegion,
    region_between,
    region_over_arc,
    body_from_json_dict,
    sphere_band_measure,
    spherical_cap_measure,
)
from .functionals import (
    InequalityReport,
    QuadratureConfig,
    RadialDensityMeasure,
    bound_constants,
    busemann_functional,
    busemann_functional_with_error,
    f_spherical,
    f_spherical_concavity_limit,
    f_spherical_limit,
    fn_hyperbolic,
    fn_hyperbolic_inverse,
    g_hyperbolic,
    h_hyperbolic,
    gaussian_measure,
    custom_measure,
    uniform_measure,
    lune_bound,
    phi_ratio_inequality_check,
    psi,
    psi_inverse,
    big_psi,
    rhs_bound,
    section_volume,
    volume,
)
from .verify import (
    PerturbationResult,
    SearchTrace,
    c5_constant,
    c_chain,
    extremizer_search,
    perturbation_sign_experiment,
    run_theorem_suite,
    sharpness_schedule,
)

__version__ = "0.1.0"
