"""Input checks shared by the estimator front end."""

import numpy as np
from sklearn.utils.validation import check_array

from .errors import DimensionError, UnknownFieldError
from .sweep import _axis_setter, _known_output


def check_axis_names(axes):
    axes = tuple(axes)
    if not axes:
        raise DimensionError("at least one axis is required")
    for name in axes:
        if _axis_setter(name) is None:
            raise UnknownFieldError(f"unknown axis name {name!r}")
    if len(set(axes)) != len(axes):
        raise DimensionError(f"duplicate axis names {axes}")
    return axes


def check_output_names(outputs):
    outputs = tuple(outputs)
    if not outputs:
        raise DimensionError("at least one output is required")
    for name in outputs:
        if name == "fisher" or not _known_output(name):
            raise UnknownFieldError(f"unknown output {name!r}")
    return outputs


def check_design_matrix(X, n_features):
    """2-D finite float array with ``n_features`` columns."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != n_features:
        raise DimensionError(f"X has {X.shape[1]} columns, expected {n_features}")
    return X
