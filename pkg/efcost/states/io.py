"""
JSON documents for states and Choi matrices.

A document is ``{"dims": [dA, dB], "re": [...], "im": [...]}``; nested 2-D
arrays describe a density matrix, flat arrays a pure state vector.
"""
import json
import logging
from typing import Union

import numpy as np
import torch

from efcost.linalg import DimSplit
from efcost.utils.constants import DTYPE
from efcost.utils.exceptions import StateFormatError
from efcost.utils.helper import save_json

from .bipartite import DensityMatrix, PureState, density_from_pure

logger = logging.getLogger(__name__)

__all__ = [
    "state_to_dict",
    "state_from_dict",
    "dump_state",
    "load_state",
]

State = Union[DensityMatrix, PureState]


def state_to_dict(state: State) -> dict:
    data = state.mat if isinstance(state, DensityMatrix) else state.vec
    return {
        "dims": [int(state.split.dA), int(state.split.dB)],
        "re": data.real.tolist(),
        "im": data.imag.tolist(),
    }


def state_from_dict(doc: dict, as_density: bool = True) -> State:
    """
    Rebuild a state from its document.

    Malformed documents raise ``StateFormatError``; well-formed documents whose
    contents break a state invariant raise ``ContractViolation``. With
    ``as_density`` a pure-state document is promoted to its projector.
    """
    if not isinstance(doc, dict):
        raise StateFormatError(f"A state document is a JSON object, but got {type(doc).__name__}.")
    missing = [k for k in ("dims", "re") if k not in doc]
    if missing:
        raise StateFormatError(f"State document is missing the fields {missing}.")
    try:
        dims = [int(d) for d in doc["dims"]]
        re = np.asarray(doc["re"], dtype=np.float64)
        im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=np.float64)
    except (TypeError, ValueError) as err:
        raise StateFormatError(f"State document has non-numeric entries: {err}")
    if len(dims) != 2 or min(dims) < 1:
        raise StateFormatError(f"`dims` should be two positive integers, but got {doc['dims']}.")
    if re.shape != im.shape or re.ndim not in (1, 2):
        raise StateFormatError(f"`re` and `im` should be matching 1-D or 2-D arrays, got {re.shape} and {im.shape}.")
    data = torch.from_numpy(re + 1j * im).to(DTYPE)
    split = DimSplit(*dims)
    if data.shape[0] != split.dim:
        raise StateFormatError(f"`dims` {dims} describe dimension {split.dim}, but the data has shape {tuple(data.shape)}.")
    if data.ndim == 1:
        state = PureState(data, split)
        return density_from_pure(state) if as_density else state
    return DensityMatrix(data, split)


def dump_state(state: State, filename: str = None) -> str:
    return save_json(state_to_dict(state), filename)


def load_state(filename: str, as_density: bool = True) -> State:
    try:
        with open(filename, "r") as fp:
            doc = json.load(fp)
    except OSError as err:
        raise StateFormatError(f"Cannot read state file {filename}: {err}")
    except json.JSONDecodeError as err:
        raise StateFormatError(f"State file {filename} is not valid JSON: {err}")
    logger.info(f"[States] loaded {filename}")
    return state_from_dict(doc, as_density=as_density)
