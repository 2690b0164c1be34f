"""Simulation and certification toolkit for chemotaxis systems with
nonlinear chemosensitivity (K s^alpha) and sublinear signal production
(K0 s^l) under zero-flux boundaries."""

from .certificate import (
    AuxiliaryPair,
    Certificate,
    CertificateError,
    CheckResult,
    CoefficientSet,
    ConstraintViolation,
    InfeasibleError,
    ExponentSet,
    VerificationReport,
    WitnessSearchError,
    assemble_certificate,
    certificate_from_text,
    certificate_to_text,
    choose_pq,
    coeffs_ABCD,
    exponent_set,
    find_theta_mu,
    h_limit,
    h_value,
    make_certificate,
    p_interval,
    q_threshold,
    verify_certificate,
)
from .diagnostics import (
    ClassifyThresholds,
    DiagnosticRecord,
    RunClass,
    classify_run,
    format_csv,
    make_record,
    write_csv,
    functional_y,
    grad_norm_2q,
    lp_norm,
    mass,
    w1n_norm,
)
from .grid import Field, Grid, make_field
from .ineq import ode_comparison_bound, power_sum_lower, young_product_constant
from .model import (
    ModelParams,
    RegionTag,
    RegionVerdict,
    classify_pe,
    classify_pp,
    eval_production,
    eval_sensitivity,
)
from .region import RegionRow, format_region_csv, region_table, write_region_csv
from .solver import (
    ConfigError,
    Mode,
    SimConfig,
    SimResult,
    SimState,
    EllipticSolveError,
    Termination,
    init_state,
    load_sim_config,
    run,
    sim_config_from_mapping,
    solve_elliptic,
    step_pe,
    step_pp,
)

__version__ = "0.1.0"
