"""Configuration loading, grid sweeps and CSV/JSON emission."""

import csv
import dataclasses
import datetime
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import tomli

from ._version import __version__
from .errors import ConfigParseError, ConfigValueError, DomainError, UnknownFieldError
from .model import TWO_PI, SystemParams
from .pipeline import BOUND_KEYS, OCCUPATION_KEYS, OK, UNSTABLE, EvalOptions, evaluate_point

FREQUENCY_FIELDS = ("omega_a", "omega_m", "omega_d", "kappa_a", "kappa_m", "gamma_d", "delta_a",
                    "delta_m", "g_ma", "g_md", "J_md", "rabi_omega")
PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(SystemParams))
SCALES = ("linear", "log")
DIAGNOSTIC_KEYS = ("stable", "spectral_abscissa", "physicality_margin", "g_md_realized", "J_md")
DEFAULT_OUTPUTS = BOUND_KEYS + OCCUPATION_KEYS + ("stable", "spectral_abscissa", "physicality_margin")
STATUS_COLUMNS = ("status", "error_kind")


# --- axis names ------------------------------------------------------------

def _axis_setter(name):
    """Map an axis name to ``f(params, value) -> params``; ``None`` if unknown."""
    if name in PARAM_FIELDS and name != "repetitions":
        return lambda p, v: p.replace(**{name: float(v)})
    if name == "repetitions":
        return lambda p, v: p.replace(repetitions=int(round(v)))
    if name == "delta_a_over_delta_m":
        return lambda p, v: p.replace(delta_a=v * p.delta_m)
    for suffix, scale in (("_hz_over_2pi", lambda p: TWO_PI), ("_over_omega_d", lambda p: p.omega_d)):
        if name.endswith(suffix):
            base = name[: -len(suffix)]
            if base in FREQUENCY_FIELDS and not (base == "omega_d" and suffix == "_over_omega_d"):
                return lambda p, v, base=base, scale=scale: p.replace(**{base: v * scale(p)})
    return None


def apply_value(params, name, value):
    setter = _axis_setter(name)
    if setter is None:
        raise UnknownFieldError(f"unknown parameter or axis name {name!r}")
    try:
        return setter(params, value)
    except DomainError as exc:
        raise ConfigValueError(str(exc)) from exc


@dataclass(frozen=True)
class Axis:
    name: str
    start: float = 0.0
    stop: float = 1.0
    count: int = 2
    scale: str = "linear"
    values: tuple = None

    def __post_init__(self):
        if _axis_setter(self.name) is None:
            raise UnknownFieldError(f"unknown axis name {self.name!r}")
        if self.values is not None:
            vals = tuple(float(v) for v in self.values)
            if not vals:
                raise ConfigValueError(f"axis {self.name!r}: values list is empty")
            object.__setattr__(self, "values", vals)
            object.__setattr__(self, "count", len(vals))
            return
        if self.scale not in SCALES:
            raise ConfigValueError(f"axis {self.name!r}: scale must be one of {SCALES}, got {self.scale!r}")
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 1:
            raise ConfigValueError(f"axis {self.name!r}: count must be a positive integer, got {self.count!r}")
        for key in ("start", "stop"):
            if not math.isfinite(getattr(self, key)):
                raise ConfigValueError(f"axis {self.name!r}: {key} must be finite")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ConfigValueError(f"axis {self.name!r}: log scale needs positive start and stop")
        object.__setattr__(self, "count", int(self.count))

    @property
    def grid(self):
        if self.values is not None:
            return np.array(self.values)
        if self.count == 1:
            return np.array([float(self.start)])
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def as_dict(self):
        d = {"name": self.name, "start": self.start, "stop": self.stop, "count": self.count, "scale": self.scale}
        if self.values is not None:
            d["values"] = list(self.values)
        return d


def _known_output(name):
    return (name in DEFAULT_OUTPUTS or name in DIAGNOSTIC_KEYS or name == "fisher"
            or name.startswith(("F_sld[", "F_cfi[", "F_rld_re[", "F_rld_im[", "floor_sld[", "floor_rld[")))


def fisher_keys(estimands):
    keys = []
    for i, a in enumerate(estimands):
        for j in range(i, len(estimands)):
            tag = f"{a}__{estimands[j]}"
            keys += [f"F_sld[{tag}]", f"F_cfi[{tag}]", f"F_rld_re[{tag}]"]
            if i != j:
                keys.append(f"F_rld_im[{tag}]")
    return keys


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams = field(default_factory=SystemParams)
    axes: tuple = ()
    outputs: tuple = DEFAULT_OUTPUTS
    options: EvalOptions = field(default_factory=EvalOptions)
    label: str = "sweep"

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(self.axes) > 2:
            raise ConfigValueError(f"at most two axes are supported, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigValueError(f"duplicate axis names {names}")
        for name in self.outputs:
            if not _known_output(name):
                raise UnknownFieldError(f"unknown output {name!r}")

    @property
    def columns(self):
        cols = []
        for name in self.outputs:
            cols.extend(fisher_keys(self.options.estimands) if name == "fisher" else [name])
        return tuple(cols)

    @property
    def shape(self):
        return tuple(a.count for a in self.axes)

    def points(self):
        """Row-major ``(coords, params)`` pairs; the last axis varies fastest."""
        grids = [a.grid for a in self.axes]
        for coords in itertools.product(*grids):
            p = self.base
            for axis, v in zip(self.axes, coords):
                p = apply_value(p, axis.name, float(v))
            yield tuple(float(c) for c in coords), p

    def resolved(self):
        return {
            "label": self.label,
            "params": dataclasses.asdict(self.base),
            "options": self.options.as_dict(),
            "axes": [a.as_dict() for a in self.axes],
            "outputs": list(self.outputs),
        }


# --- config files ----------------------------------------------------------

_OPTION_FIELDS = tuple(f.name for f in dataclasses.fields(EvalOptions))


def params_from_mapping(mapping, base=None):
    """Build :class:`SystemParams` from config keys, accepting ``*_hz_over_2pi``."""
    changes = {}
    for key, value in mapping.items():
        if key.endswith("_hz_over_2pi") and key[: -len("_hz_over_2pi")] in FREQUENCY_FIELDS:
            target, value = key[: -len("_hz_over_2pi")], _number(key, value) * TWO_PI
        elif key in PARAM_FIELDS:
            target = key
            if key == "g_md" and value == "from_J_md":
                value = None
            elif key == "repetitions":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigValueError(f"repetitions must be an integer, got {value!r}")
            else:
                value = _number(key, value)
        else:
            raise UnknownFieldError(f"unknown parameter {key!r}")
        if target in changes:
            raise ConfigValueError(f"parameter {target!r} given more than once")
        changes[target] = value
    try:
        return (base or SystemParams()).replace(**changes)
    except DomainError as exc:
        raise ConfigValueError(str(exc)) from exc


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValueError(f"{key} must be a number, got {value!r}")
    return float(value)


def options_from_mapping(mapping, base=None):
    changes = {}
    for key, value in mapping.items():
        if key not in _OPTION_FIELDS:
            raise UnknownFieldError(f"unknown option {key!r}")
        if key == "estimands":
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ConfigValueError("estimands must be a list of parameter names")
            for v in value:
                if v not in PARAM_FIELDS:
                    raise UnknownFieldError(f"unknown estimand {v!r}")
            value = tuple(value)
        elif key == "derivative":
            if not isinstance(value, str):
                raise ConfigValueError(f"derivative must be a string, got {value!r}")
        elif key == "include_displacement":
            if not isinstance(value, bool):
                raise ConfigValueError(f"include_displacement must be true or false, got {value!r}")
        else:
            value = _number(key, value)
        changes[key] = value
    try:
        return dataclasses.replace(base or EvalOptions(), **changes)
    except DomainError as exc:
        raise ConfigValueError(str(exc)) from exc


def _axis_from_mapping(mapping):
    if not isinstance(mapping, dict) or "name" not in mapping:
        raise ConfigValueError("each [[sweep.axes]] entry needs a name")
    unknown = set(mapping) - {"name", "start", "stop", "count", "scale", "values"}
    if unknown:
        raise UnknownFieldError(f"unknown axis key(s) {sorted(unknown)}")
    kwargs = dict(mapping)
    if "values" in kwargs:
        kwargs["values"] = tuple(_number("values", v) for v in kwargs["values"])
    else:
        for key in ("start", "stop"):
            if key not in kwargs:
                raise ConfigValueError(f"axis {mapping['name']!r} is missing {key!r}")
            kwargs[key] = _number(key, kwargs[key])
    return Axis(**kwargs)


def spec_from_mapping(doc, label="sweep"):
    unknown = set(doc) - {"params", "options", "sweep"}
    if unknown:
        raise UnknownFieldError(f"unknown section(s) {sorted(unknown)}")
    base = params_from_mapping(doc.get("params", {}))
    options = options_from_mapping(doc.get("options", {}))
    sweep = doc.get("sweep", {})
    unknown = set(sweep) - {"axes", "outputs", "label"}
    if unknown:
        raise UnknownFieldError(f"unknown [sweep] key(s) {sorted(unknown)}")
    axes = tuple(_axis_from_mapping(a) for a in sweep.get("axes", []))
    outputs = tuple(sweep.get("outputs", DEFAULT_OUTPUTS))
    return SweepSpec(base=base, axes=axes, outputs=outputs, options=options,
                     label=sweep.get("label", label))


def parse_config(text, label="sweep"):
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigParseError(exc.msg if hasattr(exc, "msg") else str(exc),
                               getattr(exc, "lineno", None), getattr(exc, "colno", None)) from exc
    return spec_from_mapping(doc, label)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigValueError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, label=str(path))


def parse_override(text):
    """``key=value`` with a TOML value; bare words are taken as strings."""
    if "=" not in text:
        raise ConfigValueError(f"override {text!r} is not of the form key=value")
    key, raw = (s.strip() for s in text.split("=", 1))
    try:
        value = tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        value = raw
    return key, value


def apply_overrides(spec, overrides):
    """Apply ``key=value`` pairs; ``options.<name>`` targets numerical options."""
    params, options = {}, {}
    for item in overrides:
        key, value = parse_override(item)
        if key.startswith("options."):
            options[key[len("options."):]] = value
        else:
            params[key.removeprefix("params.")] = value
    return dataclasses.replace(spec, base=params_from_mapping(params, spec.base),
                               options=options_from_mapping(options, spec.options))


# --- running ---------------------------------------------------------------

@dataclass
class SweepResult:
    spec: SweepSpec
    coords: list
    records: list
    summary: dict = field(default_factory=dict)

    def column(self, name):
        return np.array([np.nan if r.get(name) is None else float(r[name]) for r in self.records])

    def grid(self, name):
        return self.column(name).reshape(self.spec.shape)

    @property
    def statuses(self):
        return [r["status"] for r in self.records]


def _evaluate(task):
    params, options = task
    return evaluate_point(params, options)


def summarize(coords, records):
    counts = {s: 0 for s in (OK, UNSTABLE, "error")}
    for r in records:
        counts[r["status"]] += 1
    summary = {"n_points": len(records), "n_ok": counts[OK], "n_unstable": counts[UNSTABLE],
               "n_error": counts["error"]}
    ok = [i for i, r in enumerate(records) if r["status"] == OK]
    for key, pick, tag in (("c_mi", min, "min"), ("ratio", max, "max")):
        if ok:
            best = pick(ok, key=lambda i: records[i][key])
            summary[f"{tag}_{key}"] = records[best][key]
            summary[f"arg{tag}_{key}"] = list(coords[best])
        else:
            summary[f"{tag}_{key}"] = None
            summary[f"arg{tag}_{key}"] = None
    return summary


def run_sweep(spec, workers=1):
    """Evaluate every grid point; order is row-major whatever ``workers`` is."""
    if int(workers) != workers or workers < 1:
        raise ConfigValueError(f"workers must be a positive integer, got {workers!r}")
    pairs = list(spec.points())
    coords = [c for c, _ in pairs]
    tasks = [(p, spec.options) for _, p in pairs]
    if workers == 1 or len(tasks) < 2:
        records = [_evaluate(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_evaluate, tasks, chunksize=chunk))
    return SweepResult(spec, coords, records, summarize(coords, records))


# --- emission ----------------------------------------------------------------

def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "" if not math.isfinite(value) else repr(float(value))
    return str(value)


def _json_value(value):
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def records_for_output(result):
    names = [a.name for a in result.spec.axes]
    cols = result.spec.columns
    rows = []
    for c, r in zip(result.coords, result.records):
        row = dict(zip(names, c))
        for key in cols:
            row[key] = r.get(key)
        row["status"] = r["status"]
        row["error_kind"] = r.get("error_kind")
        rows.append(row)
    return rows


def to_csv(result, fh):
    header = [a.name for a in result.spec.axes] + list(result.spec.columns) + list(STATUS_COLUMNS)
    writer = csv.writer(fh, lineterminator="\r\n")
    writer.writerow(header)
    for row in records_for_output(result):
        writer.writerow([_cell(row[k]) for k in header])


def to_json_document(result, timestamp=None):
    if timestamp is None:
        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    records = [{k: _json_value(v) for k, v in row.items()} for row in records_for_output(result)]
    return {
        "metadata": {
            "tool": "magnoqcrb",
            "version": __version__,
            "timestamp": timestamp,
            "config": result.spec.resolved(),
            "units": {
                "frequencies": "rad/s unless the axis name ends in _hz_over_2pi or _over_omega_d",
                "bounds": "estimand units of param_unit rad/s, squared",
            },
        },
        "records": records,
        "summary": {k: _json_value(v) for k, v in result.summary.items()},
    }


def emit(result, fmt, path):
    """Write ``result`` as ``csv`` or ``json``; ``path='-'`` writes to stdout."""
    import sys

    if fmt not in ("csv", "json"):
        raise ConfigValueError(f"format must be csv or json, got {fmt!r}")
    try:
        if path in (None, "-"):
            _write(result, fmt, sys.stdout)
        else:
            with open(path, "w", newline="", encoding="utf-8") as fh:
                _write(result, fmt, fh)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _write(result, fmt, fh):
    if fmt == "csv":
        to_csv(result, fh)
    else:
        json.dump(to_json_document(result), fh, indent=1, allow_nan=False)
        fh.write("\n")
