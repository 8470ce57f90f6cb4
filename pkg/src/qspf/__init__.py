"""qspf: phase factors for even quantum signal processing targets.

Two production solvers plus oracles:

* half-Cholesky route (`hc_phase_factors`): completion of the target to an
  SU(2) Laurent pair, then a displacement-structure LDL half-solve,
  O(d^2) after an O(N log N) completion step;
* fixed-point iteration (`fpi_solve`): contraction on reduced phases with
  a fast O(d log^2 d) polynomial evaluator.

See the README for CLI usage (`qspf solve|bench|verify`).
"""

from .errors import (
    AliasError,
    BreakdownError,
    DivergenceError,
    DomainError,
    GridExhausted,
    MaxIterReached,
    NormViolation,
    NotImaginary,
    QspfError,
    SingularSystem,
    SolverError,
    UnsupportedParity,
)
from .fpi import L1_CONVERGENCE_BOUND, FpiConfig, SolveReport, check_convergence_domain, fpi_solve
from .halfchol import HalfCholResult, hc_phase_factors, schur_ldl_halfsolve
from .poly import ChebTarget, LaurentPoly, cheb_to_laurent_b
from .qsp import (
    PhaseFactors,
    SU2LaurentPair,
    cheb_coeffs_direct,
    direct_residual,
    eval_direct,
    eval_fast_cheb,
    expand_reduced,
    nlft_forward,
    qsp_map_F,
)
from .targets import (
    HamSimSpec,
    bessel_j_sequence,
    hamsim_target,
    load_target,
    random_target,
    save_target,
    sup_norm,
)
from .weiss import WeissConfig, WeissResult, rhw_phase_factors, weiss

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "QspfError", "DomainError", "UnsupportedParity", "AliasError",
    "NormViolation", "GridExhausted", "NotImaginary", "SingularSystem",
    "BreakdownError", "SolverError", "DivergenceError", "MaxIterReached",
    # polynomials and targets
    "LaurentPoly", "ChebTarget", "cheb_to_laurent_b",
    "HamSimSpec", "hamsim_target", "random_target", "sup_norm",
    "bessel_j_sequence", "save_target", "load_target",
    # QSP evaluation
    "PhaseFactors", "expand_reduced", "eval_direct", "eval_fast_cheb",
    "cheb_coeffs_direct", "qsp_map_F", "direct_residual",
    "SU2LaurentPair", "nlft_forward",
    # solvers
    "WeissConfig", "WeissResult", "weiss", "rhw_phase_factors",
    "HalfCholResult", "schur_ldl_halfsolve", "hc_phase_factors",
    "FpiConfig", "SolveReport", "fpi_solve", "check_convergence_domain",
    "L1_CONVERGENCE_BOUND",
]
