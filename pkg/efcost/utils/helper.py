import json
import sys
from typing import Any, List, Optional

import numpy as np


def save_json(data, filename: Optional[str] = None) -> str:
    """
    Serialize ``data`` with a fixed key order and write it to ``filename`` (or stdout).

    Returns the text that was written, so callers can compare runs byte by byte.
    """
    text = json.dumps(data, sort_keys=True, indent=4) + "\n"
    if filename is None:
        sys.stdout.write(text)
    else:
        with open(filename, 'w') as fp:
            fp.write(text)
    return text


def spawn_generators(seed: int, n: int) -> List[np.random.Generator]:
    """
    Split ``seed`` into ``n`` independent PCG64 streams.

    Stream ``i`` is ``default_rng(SeedSequence(seed).spawn(n)[i])``; spawning is
    prefix-stable, so stream ``i`` does not depend on ``n``.

    Examples
    --------
    >>> a = spawn_generators(7, 2)[1].integers(1 << 30)
    >>> b = spawn_generators(7, 5)[1].integers(1 << 30)
    >>> bool(a == b)
    True
    """
    if n < 0:
        raise ValueError(f"The number of streams should be non-negative, but got {n}.")
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.default_rng(child) for child in children]


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    return obj
