from .bipartite import (
    PureState,
    DensityMatrix,
    BellMixParam,
    BELL_KINDS,
    bell_state,
    bell_mix,
    density_from_pure,
    mixture,
    random_pure,
    random_density,
    state_rng,
)
from .subspaces import (
    SubspaceBasis,
    EXAMPLE_IDS,
    subspace_basis,
    embed,
    random_coefficients,
    random_subspace_density,
    example_catalogue,
)
from .ensemble import Decomposition
from .io import (
    state_to_dict,
    state_from_dict,
    dump_state,
    load_state,
)
