from .qmat import (
    DimSplit,
    as_matrix,
    as_vector,
    dagger,
    is_hermitian,
    kron,
    outer,
    partial_trace,
    partial_trace_multi,
    partial_transpose,
    permute_subsystems,
    eig_hermitian,
    psd_function,
    psd_sqrt,
    max_abs_diff,
)
from .jacobi import jacobi_eigh
from .autograd import (
    InvSqrtPsd,
    TraceEntropy,
    inv_sqrt_psd,
    polar_isometry,
    trace_entropy,
    ensemble_objective,
)
