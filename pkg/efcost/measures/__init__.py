from .entropy import (
    EbitValue,
    as_ebits,
    binary_entropy,
    shannon_entropy,
    von_neumann_entropy,
    reduced_spectrum,
    entropy_of_entanglement,
    ssa_check,
)
from .twoqubit import (
    concurrence,
    ef_from_concurrence,
    ef_two_qubit,
    ec_bell_mix,
    ed_hashing,
    irreversibility_gap,
    bell_mix_optimal_decomposition,
)
from .subspace import (
    ConstancyReport,
    constant_entanglement_check,
    ef_constant_subspace,
)
