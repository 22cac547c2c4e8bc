"""deltalap: numerical operator calculus for the planar point-interaction
Laplacian (rank-one resolvents, fractional powers, regular/singular
decompositions, a mass-conserving Cayley propagator, and a local nonlinear
Schroedinger solver)."""

__version__ = "0.1.0"

from .config import RunConfig
from .errors import (
    ConfigError,
    DeltalapError,
    DomainError,
    GridMismatchError,
    MembershipError,
    NonContractionError,
    PoleError,
    ToleranceNotMetError,
)
from .field import (
    Field2D,
    Grid2D,
    NormReport,
    bilinear_pairing,
    fourier_multiplier,
    load_field,
    lp_norm,
    pairing,
    sample_radial,
    save_field,
    sobolev_norm_1p,
    upsample,
    weak_lp_quasinorm,
)
from .nls import (
    NlsProblem,
    SolverTrace,
    energy,
    energy_field,
    mass,
    nonlinear_phase,
    picard_solve,
    rescale_alpha,
    rescale_field,
    sobolev_embedding_check,
    strang_propagate,
    strang_step,
)
from .operator import (
    Decomposition,
    PointInteraction,
    apply_forward,
    beta,
    beta_discrete,
    c_functional,
    free_resolvent,
    gamma0_op,
    gamma1_op,
    gamma_op,
    green_field,
    green_field_discrete,
    h1_alpha_norm,
    inv_sqrt,
    lambda_decompose,
    resolvent,
    resolvent_decomposition,
)
from .propagator import (
    SpaceTimeNorm,
    TimeGrid,
    cn_step,
    propagate,
    strichartz_norm,
)
from .quadrature import QuadratureRule
from .special import BesselEval, bessel_k0, cutoff_phi, phi0, remainder_R, split_R

__all__ = [name for name in dir() if not name.startswith("_")]
