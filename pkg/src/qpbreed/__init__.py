"""Breeding of approximate grid (GKP qunaught) states from binomial code
states on a truncated Fock space, with exact post-selected probability
bookkeeping."""

from .fock import (
    BinomialParams,
    FockConfig,
    QunaughtParams,
    annihilation,
    beamsplitter,
    binomial_state,
    displacement,
    quadrature,
    qunaught_state,
    squeezed_vacuum,
)
from .homodyne import (
    OutcomeDistribution,
    QuadratureBasis,
    label_peaks,
    outcome_distribution,
    project_outcome,
    quadrature_basis,
)
from .metrics import (
    EffectiveSqueezingReport,
    WignerGrid,
    effective_squeezing,
    effective_squeezing_report,
    fidelity,
    position_density,
    sgkp_db,
    wigner,
)
from .numerics import DEFAULT_TOLERANCES, NumericalError, Tolerances
from .protocol import (
    BranchResult,
    LeafRecord,
    Schedule,
    SweepRecord,
    breed_step,
    default_input,
    default_target,
    effective_squeezing_curve,
    enumerate_two_iterations,
    probability_fidelity_curve,
    run_chain,
    sign_aggregated,
    sweep_binomial_inputs,
)

__version__ = "0.1.0"

__all__ = [
    "BinomialParams",
    "BranchResult",
    "DEFAULT_TOLERANCES",
    "EffectiveSqueezingReport",
    "FockConfig",
    "LeafRecord",
    "NumericalError",
    "OutcomeDistribution",
    "QuadratureBasis",
    "QunaughtParams",
    "Schedule",
    "SweepRecord",
    "Tolerances",
    "WignerGrid",
    "annihilation",
    "beamsplitter",
    "binomial_state",
    "breed_step",
    "default_input",
    "default_target",
    "displacement",
    "effective_squeezing",
    "effective_squeezing_curve",
    "effective_squeezing_report",
    "enumerate_two_iterations",
    "fidelity",
    "label_peaks",
    "outcome_distribution",
    "position_density",
    "probability_fidelity_curve",
    "project_outcome",
    "quadrature",
    "quadrature_basis",
    "qunaught_state",
    "run_chain",
    "sgkp_db",
    "sign_aggregated",
    "squeezed_vacuum",
    "sweep_binomial_inputs",
    "wigner",
]
