from efcost.states import Decomposition

from .ensembles import (
    eigen_frame,
    scaled_eigenvectors,
    decompose_sqrt,
    ensemble_from_isometry,
    isometry_from_ensemble,
    average_entanglement,
)
from .search import (
    OptimizerConfig,
    EfResult,
    EfReference,
    ef_upper_bound,
    ef_reference,
)
from .additivity import (
    AdditivityResult,
    joint_state,
    product_decomposition,
    additivity_gap,
)
