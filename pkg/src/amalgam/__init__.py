"""Wiener amalgam norms, spectral Stokes operators, Picard mild solutions,
and a desk-scale verification harness for their decay and spacetime bounds."""

from .grid import (
    INF,
    AlignmentError,
    DomainError,
    Exponent,
    FieldSeries,
    GridField,
    GridSpec,
    PreconditionError,
    ResolutionError,
    as_exponent,
    recip,
    series_combine,
)
from .norms import (
    NormSpec,
    amalgam_norm,
    cube_norms,
    holder_gap,
    lebesgue_norm,
    local_energy_norm,
    spacetime_norm,
)
from .serialize import read_field, write_field, write_norm_csv
from .spectral import (
    bilinear_B,
    bilinear_series,
    divergence_max,
    duhamel,
    duhamel_series,
    gradient,
    heat_evolve,
    leray_project,
    oseen_apply,
    translate,
    workspace_for,
)
from .kernels import eval_kernel, kernel_amalgam_bound, oseen_pointwise_bound
from .solver import (
    PicardTrace,
    RegularizedConfig,
    SolverConfig,
    apriori_quantities,
    picard_solve,
    regularized_solve,
    subcritical_timescale,
    weighted_norms,
)
from .constructions import (
    BubbleTrainSpec,
    DeltaTrainSpec,
    gen_bubble_train,
    gen_divfree_random,
    gen_moving_bump,
    gen_strict_inclusion,
    sample_delta_train,
    verify_bubble_blowup,
)
from .report import (
    ScalingFit,
    VerifyReport,
    emit_report,
    fit_exponent,
    load_reports,
)
from .scenarios import CATALOG, run_scenario

__version__ = "0.1.0"
