"""Delta calculus on finite time scales and numerical verification of the
weighted Montgomery identity, trapezoid and Grüss inequalities."""
from .calculus import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    cumulative_delta_integral,
    delta_derivative,
    delta_integral,
    hk,
    shifted_delta_derivative,
)
from .errors import *  # noqa: F401,F403
from .funcdsl import IDENTITY_PSI, DifferentiableFn, ParamFunction, parse, psi_eval, to_string
from .harness import (
    Scenario,
    SuiteReport,
    emit_report,
    generate_scenarios,
    load_report,
    load_scenario,
    reduction_check,
    run_suite,
)
from .identity import IdentityResidual, montgomery_residual, montgomery_sweep
from .inequality import (
    InequalityReport,
    SupNorms,
    gruss_corollary_classic,
    gruss_corollary_R,
    gruss_corollary_Z,
    gruss_verify,
    pachpatte_gruss,
    pachpatte_trapezoid,
    sup_norms,
    trapezoid_corollary_linear,
    trapezoid_corollary_R,
    trapezoid_corollary_wt,
    trapezoid_corollary_Z,
    trapezoid_verify,
)
from .kernel import KernelParams, WeightPair, abs_kernel_double_integral, abs_kernel_line_integral, build_kernel
from .timescale import Segment, TimeScale

__version__ = "0.1.0"
