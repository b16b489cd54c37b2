"""Phase-space information measures for the intensity-dependent Jaynes-Cummings model."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    JointStateBranches,
    ModelConfig,
    choose_truncation,
    coherent_amplitudes,
    evolve_brute_force,
    evolve_closed_form,
    state_fidelity,
)
from .phase_space import (  # noqa: E402
    PhaseSpaceGrid,
    QField,
    build_grid,
    coherent_overlap,
    husimi_gradient,
    husimi_q,
    integrate,
    sample_qfield,
)
from .measures import (  # noqa: E402
    MeasureRecord,
    VariancePair,
    beta_moments,
    cr_product,
    fisher_gamma,
    fisher_information,
    fisher_pd,
    initial_fisher_pd_closed_form,
    initial_identities,
    marginal_cr_check,
    marginal_stats,
    measure_record,
    wehrl_entropy,
    wehrl_pd,
)
