from .constants import (
    DTYPE,
    REAL_DTYPE,
    HERMITIAN_TOL,
    PSD_CLIP,
    RANK_TOL,
)
from .exceptions import (
    EntanglementError,
    DomainError,
    DimensionError,
    SizeError,
    ContractViolation,
    StateFormatError,
)
from .helper import (
    save_json,
    spawn_generators,
    to_jsonable,
)
