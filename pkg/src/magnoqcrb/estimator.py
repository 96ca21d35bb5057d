"""scikit-learn compatible front end.

``transform`` maps rows of axis values (one column per axis) to the
requested outputs, which makes the bounds usable inside pipelines and
grid-search utilities.
"""

from concurrent.futures import ProcessPoolExecutor

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .linalg import DEFAULT_PINV_TOL
from .model import TWO_PI, SystemParams
from .pipeline import OK, EvalOptions, run_point
from .sweep import _evaluate, apply_value
from .validation import check_axis_names, check_design_matrix, check_output_names


class GaussianMetrologyEstimator(TransformerMixin, BaseEstimator):
    """Cramér-Rao bounds of the coupling estimands as a transformer.

    Parameters mirror :class:`~magnoqcrb.pipeline.EvalOptions`; ``params``
    is the base operating point (baseline when ``None``), ``axes`` names
    the columns of ``X`` and ``outputs`` the columns of the result.
    Unstable or failing points give ``NaN`` rows.
    """

    def __init__(self, params=None, estimands=("g_ma", "g_md"), axes=("delta_a_over_omega_d",),
                 outputs=("c_mi", "ratio"), derivative="analytic-lyapunov", fd_step=1e-6,
                 pinv_tol=DEFAULT_PINV_TOL, vacuum_penalty=1.0, param_unit=TWO_PI * 1e6,
                 include_displacement=True, n_jobs=1):
        self.params = params
        self.estimands = estimands
        self.axes = axes
        self.outputs = outputs
        self.derivative = derivative
        self.fd_step = fd_step
        self.pinv_tol = pinv_tol
        self.vacuum_penalty = vacuum_penalty
        self.param_unit = param_unit
        self.include_displacement = include_displacement
        self.n_jobs = n_jobs

    def _options(self):
        return EvalOptions(estimands=tuple(self.estimands), derivative=self.derivative,
                           fd_step=self.fd_step, pinv_tol=self.pinv_tol,
                           vacuum_penalty=self.vacuum_penalty, param_unit=self.param_unit,
                           include_displacement=self.include_displacement)

    def fit(self, X=None, y=None):
        """Validate settings and evaluate the base operating point."""
        self.axes_ = check_axis_names(self.axes)
        self.outputs_ = check_output_names(self.outputs)
        self.options_ = self._options()
        self.base_ = SystemParams() if self.params is None else self.params
        if X is not None:
            check_design_matrix(X, len(self.axes_))
        self.n_features_in_ = len(self.axes_)
        res = run_point(self.base_, self.options_)
        self.record_ = res.record
        self.state_ = res.state
        self.fisher_ = res.fisher
        self.bounds_ = res.bounds
        return self

    def _row_params(self, row):
        p = self.base_
        for name, v in zip(self.axes_, row):
            p = apply_value(p, name, float(v))
        return p

    def evaluate(self, X):
        """Full record dicts for each row of ``X``."""
        check_is_fitted(self, "options_")
        X = check_design_matrix(X, self.n_features_in_)
        tasks = [(self._row_params(row), self.options_) for row in X]
        if self.n_jobs in (None, 1) or len(tasks) < 2:
            return [_evaluate(t) for t in tasks]
        with ProcessPoolExecutor(max_workers=self.n_jobs) as pool:
            return list(pool.map(_evaluate, tasks))

    def transform(self, X):
        records = self.evaluate(X)
        out = np.full((len(records), len(self.outputs_)), np.nan)
        for i, rec in enumerate(records):
            for j, name in enumerate(self.outputs_):
                value = rec.get(name)
                if value is not None and (rec["status"] == OK or name in ("stable", "spectral_abscissa")):
                    out[i, j] = float(value)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "outputs_")
        return np.asarray(self.outputs_, dtype=object)
