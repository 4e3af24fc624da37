from .channel import (
    QuantumChannel,
    PptResult,
    choi,
    choi_from_kraus,
    kraus_from_choi,
    trace_out_map,
    is_ppt,
    matrix_units,
)
from .designs import (
    mub_two_design,
    qubit_six_state,
    design_second_moment,
    symmetric_projector,
    antisymmetric_projector,
    swap_operator,
)
from .holevo import (
    HolevoTerm,
    check_povm,
    holevo_apply,
    holevo_form,
)
from .certify import (
    VERDICTS,
    METHODS,
    ProductTerm,
    EbCertificate,
    eb_certify,
    ensemble_residual,
    holevo_ensemble,
)
