"""Input checks shared by the estimator and the CLI."""
import numpy as np

from .exceptions import DimensionError
from .qmath import check_dims
from .states import DensityMatrix


def infer_bipartite_dims(side):
    d = int(round(np.sqrt(side)))
    if d * d != side:
        raise DimensionError(f"cannot infer equal bipartite dims for side length {side}")
    return (d, d)


def check_state_batch(X, dims=None):
    """Coerce ``X`` to a list of validated DensityMatrix objects.

    Accepts a single matrix (D, D), a stack (n, D, D), or an iterable of
    DensityMatrix instances.
    """
    if isinstance(X, DensityMatrix):
        return [X]
    if isinstance(X, (list, tuple)) and X and all(isinstance(r, DensityMatrix) for r in X):
        if dims is not None and any(r.dims != tuple(dims) for r in X):
            raise DimensionError("states in batch do not share the expected dims")
        return list(X)
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"expected (D, D) or (n, D, D) input, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("empty batch")
    dims = check_dims(dims, arr.shape[1]) if dims is not None else infer_bipartite_dims(arr.shape[1])
    return [DensityMatrix(m, dims) for m in arr]


def check_visibility(v):
    v = float(v)
    if not 0 <= v <= 1:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    return v
