"""Information-criterion model selection for sparse-regression PDE discovery."""

from .config import RunConfig
from .criteria import (
    ComplexityReport,
    CriterionScore,
    bic,
    estimate_ifim_inverse,
    icomp,
    max_info_complexity,
    relative_scores,
    scan_a_n,
    select,
    ubic,
)
from .discovery import (
    FieldData,
    LibrarySpec,
    SweepConfig,
    build_library,
    compute_derivatives,
    discovery_sweep,
    render_pde,
    simulate_burgers,
)
from .equivalence import AugmentedModel, augment, run_battery, verify_identity
from .errors import *  # noqa: F401,F403
from .regression import CandidateLibrary, ModelFit, best_subsets, fit_subset, gaussian_loglik
from .uncertainty import UncertaintyValue, nint, quantify_default

__version__ = "0.1.0"
