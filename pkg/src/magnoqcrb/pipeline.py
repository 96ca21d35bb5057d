"""Single-point evaluation: steady state, covariance, Fisher matrices, bounds."""

from dataclasses import asdict, dataclass

import numpy as np

from .bounds import compute_bounds
from .errors import DomainError, MagnoQCRBError
from .fisher import ANALYTIC, BACKENDS, ParametricGaussianModel, fisher_set
from .linalg import DEFAULT_PINV_TOL
from .lyapunov import GaussianState, solve_lyapunov
from .model import TWO_PI, linearize, mode_occupations

OK, UNSTABLE, ERROR = "ok", "unstable", "error"

BOUND_KEYS = ("c_sld", "c_rld", "c_mi", "c_cfi", "ratio")
OCCUPATION_KEYS = ("n_photon", "n_magnon", "n_phonon")


@dataclass(frozen=True)
class EvalOptions:
    """Numerical settings shared by every point of a run.

    ``param_unit`` rescales the estimands before bounds are formed: with
    the default ``2 pi x 1 MHz`` the bounds are in ``(2 pi MHz)^2``.
    """

    estimands: tuple = ("g_ma", "g_md")
    derivative: str = ANALYTIC
    fd_step: float = 1e-6
    pinv_tol: float = DEFAULT_PINV_TOL
    vacuum_penalty: float = 1.0
    param_unit: float = TWO_PI * 1e6
    include_displacement: bool = True

    def __post_init__(self):
        object.__setattr__(self, "estimands", tuple(self.estimands))
        if not self.estimands:
            raise DomainError("at least one estimand is required")
        if self.derivative not in BACKENDS:
            raise DomainError(f"derivative must be one of {sorted(BACKENDS)}, got {self.derivative!r}")
        if not 0 < self.fd_step < 1e-2:
            raise DomainError(f"fd_step must lie in (0, 0.01), got {self.fd_step!r}")
        if not 0 < self.pinv_tol < 1:
            raise DomainError(f"pinv_tol must lie in (0, 1), got {self.pinv_tol!r}")
        if self.vacuum_penalty not in (1.0, 0.5):
            raise DomainError(f"vacuum_penalty must be 1.0 or 0.5, got {self.vacuum_penalty!r}")
        if not self.param_unit > 0:
            raise DomainError(f"param_unit must be positive, got {self.param_unit!r}")

    def as_dict(self):
        d = asdict(self)
        d["estimands"] = list(self.estimands)
        return d


@dataclass(frozen=True)
class PointResult:
    record: dict
    state: object = None
    fisher: object = None
    bounds: object = None


def _fisher_entries(fs, names):
    out = {}
    n = len(names)
    for i in range(n):
        for j in range(i, n):
            tag = f"{names[i]}__{names[j]}"
            out[f"F_sld[{tag}]"] = float(fs.F_sld[i, j])
            out[f"F_cfi[{tag}]"] = float(fs.F_cfi[i, j])
            out[f"F_rld_re[{tag}]"] = float(fs.F_rld[i, j].real)
            if i != j:
                out[f"F_rld_im[{tag}]"] = float(fs.F_rld[i, j].imag)
    return out


def run_point(params, opts=EvalOptions()):
    """Evaluate one parameter point; structured errors become record statuses."""
    record = {"status": OK, "error_kind": None, "message": None}
    try:
        model = ParametricGaussianModel(params, opts.estimands)
        lin = linearize(model.params)
        record["spectral_abscissa"] = lin.spectral_abscissa
        record["stable"] = bool(lin.stable)
        record["g_md_realized"] = lin.steady.g_md
        record["J_md"] = lin.steady.J_md
        if not lin.stable:
            record["status"] = UNSTABLE
            return PointResult(record)
        V = solve_lyapunov(lin.A, lin.D, assume_stable=True)
        diag = GaussianState(V, lin.R_mean, check=False)
        record["physicality_margin"] = diag.physicality_margin
        state = GaussianState(V, lin.R_mean)
        record.update(zip(OCCUPATION_KEYS, mode_occupations(V, lin.R_mean)))
        dV, dR = model.derivatives(opts.derivative, opts.fd_step, lin=lin, state=state)
        u = opts.param_unit
        dV = [u * x for x in dV]
        dR = [u * x if opts.include_displacement else np.zeros_like(x) for x in dR]
        fs = fisher_set(state, dV, dR, estimands=opts.estimands,
                        pinv_tol=opts.pinv_tol, vacuum_penalty=opts.vacuum_penalty).check()
        record.update(_fisher_entries(fs, opts.estimands))
        rep = compute_bounds(fs, params.repetitions)
        record.update(rep.as_dict())
        for name, s, r in zip(opts.estimands, rep.floors_sld, rep.floors_rld):
            record[f"floor_sld[{name}]"] = float(s)
            record[f"floor_rld[{name}]"] = float(r)
        return PointResult(record, state, fs, rep)
    except MagnoQCRBError as exc:
        record.update(status=ERROR, error_kind=exc.kind, message=str(exc))
        return PointResult(record)


def evaluate_point(params, opts=EvalOptions()):
    """Record dict for one point (see :func:`run_point`)."""
    return run_point(params, opts).record
