"""Figure-reproduction presets.

Each preset is a grid (201 points per 1-D axis, 51 x 51 for density maps)
plus an overlay list: one curve per overlay value. Where the legend values
are not known, the overlay list is a documented placeholder
(``placeholder=True``) and can be replaced from the CLI with ``--overlay``.
"""

import math
from dataclasses import dataclass, replace

from .errors import ConfigValueError, UnknownFieldError
from .model import TWO_PI, SystemParams
from .pipeline import BOUND_KEYS, OCCUPATION_KEYS
from .sweep import Axis, SweepSpec, apply_value

N1, N2 = 201, 51
MHZ = 1e6


@dataclass(frozen=True)
class Preset:
    figid: str
    description: str
    axes: tuple
    overlay_names: tuple = ()
    overlay_values: tuple = ((),)
    base_changes: tuple = ()
    outputs: tuple = BOUND_KEYS + ("stable", "spectral_abscissa", "physicality_margin")
    placeholder: bool = False

    def base(self):
        p = SystemParams()
        for name, value in self.base_changes:
            p = apply_value(p, name, value)
        return p

    def specs(self, base=None, overlay_values=None, options=None):
        """``{label: SweepSpec}`` in overlay order."""
        base = self.base() if base is None else base
        values = self.overlay_values if overlay_values is None else overlay_values
        out = {}
        for combo in values:
            combo = combo if isinstance(combo, tuple) else (combo,)
            if len(combo) != len(self.overlay_names):
                raise ConfigValueError(f"{self.figid}: overlay needs values for {self.overlay_names}")
            p = base
            for name, v in zip(self.overlay_names, combo):
                p = apply_value(p, name, v)
            label = ",".join(f"{n}={v:g}" for n, v in zip(self.overlay_names, combo)) or "base"
            kw = {} if options is None else {"options": options}
            out[label] = SweepSpec(base=p, axes=self.axes, outputs=self.outputs,
                                   label=f"{self.figid}:{label}", **kw)
        return out


def _axis(name, start, stop, count=N1):
    return Axis(name=name, start=float(start), stop=float(stop), count=count)


DELTA_AXIS = (_axis("delta_a_over_omega_d", 0.0, 2.0),)
G_MA_AXIS = (_axis("g_ma_hz_over_2pi", 0.02 * MHZ, 4.0 * MHZ),)
TEMPS = ((0.01,), (0.1,), (0.5,))
KAPPAS = ((0.1 * MHZ,), (0.2 * MHZ,), (0.4 * MHZ,))
FIG8_OUT = ("c_sld", "c_rld", "c_mi", "c_cfi", "ratio", "stable", "physicality_margin")

PRESETS = {p.figid: p for p in (
    Preset("fig2a", "ratio C^R/C^S vs delta_a / omega_d for several temperatures",
           DELTA_AXIS, ("temperature",), TEMPS, placeholder=True),
    Preset("fig2b", "ratio C^R/C^S vs delta_a / omega_d for several cavity decay rates",
           DELTA_AXIS, ("kappa_a_hz_over_2pi",), KAPPAS, placeholder=True),
    Preset("fig3a", "C^MI over feedback reflectivity r and phase theta",
           (_axis("feedback_r", 0.0, 0.5, N2), _axis("feedback_theta", 0.0, TWO_PI, N2))),
    Preset("fig3b", "C^MI vs g_ma with and without feedback",
           G_MA_AXIS, ("feedback_r", "feedback_theta"), ((0.0, 0.0), (0.25, math.pi), (0.5, math.pi)),
           placeholder=True),
    Preset("fig3c", "C^MI over delta_a / delta_m and temperature at r = 0.5, theta = pi",
           (_axis("delta_a_over_delta_m", 0.0, 2.0, N2), _axis("temperature", 0.01, 2.0, N2)),
           base_changes=(("feedback_r", 0.5), ("feedback_theta", math.pi))),
    Preset("fig4a", "C^MI vs g_ma for several cavity decay rates",
           G_MA_AXIS, ("kappa_a_hz_over_2pi",), KAPPAS, placeholder=True),
    Preset("fig4b", "C^MI vs g_ma for several drive powers, kappa_a = kappa_m = 0.4 MHz",
           G_MA_AXIS, ("drive_power",), ((2.225e-3,), (4.45e-3,), (8.9e-3,)),
           base_changes=(("kappa_a_hz_over_2pi", 0.4 * MHZ), ("kappa_m_hz_over_2pi", 0.4 * MHZ)),
           placeholder=True),
    Preset("fig5a", "C^MI vs delta_a / omega_d for several temperatures",
           DELTA_AXIS, ("temperature",), TEMPS, placeholder=True),
    Preset("fig5b", "C^MI vs delta_a / omega_d for several magnon decay rates",
           DELTA_AXIS, ("kappa_m_hz_over_2pi",), KAPPAS, placeholder=True),
    Preset("fig6a", "C^MI vs g_md for several magnon Rabi frequencies, g_ma = 1 MHz",
           (_axis("g_md_hz_over_2pi", 0.02 * MHZ, 6.0 * MHZ),), ("rabi_omega_hz_over_2pi",),
           ((0.0,), (1e12,), (1e13,)), base_changes=(("g_ma_hz_over_2pi", 1.0 * MHZ),),
           placeholder=True),
    Preset("fig6b", "C^MI vs g_md for several mechanical damping rates, g_ma = 1 MHz",
           (_axis("g_md_hz_over_2pi", 0.02 * MHZ, 6.0 * MHZ),), ("gamma_d_hz_over_2pi",),
           ((5e3,), (10e3,), (20e3,)), base_changes=(("g_ma_hz_over_2pi", 1.0 * MHZ),),
           placeholder=True),
    Preset("fig7", "photon, magnon and phonon numbers vs drive power (power) and Rabi frequency (rabi)",
           (), outputs=OCCUPATION_KEYS + ("stable", "physicality_margin")),
    Preset("fig8a", "C^MI and heterodyne C^C vs g_ma at T = 0.5 K",
           G_MA_AXIS, base_changes=(("temperature", 0.5),), outputs=FIG8_OUT),
    Preset("fig8b", "C^MI and heterodyne C^C vs kappa_a at T = 0.5 K",
           (_axis("kappa_a_hz_over_2pi", 0.02 * MHZ, 1.0 * MHZ),),
           base_changes=(("temperature", 0.5),), outputs=FIG8_OUT),
)}

# fig7 has two independent abscissae, one spec each.
FIG7_AXES = {
    "power": _axis("drive_power", 0.0, 20e-3),
    "rabi": _axis("rabi_omega_hz_over_2pi", 0.0, 1e13),
}


def preset_specs(figid, base=None, overlay_values=None, options=None):
    """Specs for figure ``figid`` as an ordered ``{label: SweepSpec}`` dict."""
    if figid not in PRESETS:
        raise UnknownFieldError(f"unknown figure id {figid!r}; choose from {sorted(PRESETS)}")
    preset = PRESETS[figid]
    if figid == "fig7":
        out = {}
        for label, axis in FIG7_AXES.items():
            p = replace(preset, axes=(axis,))
            (spec,) = p.specs(base, overlay_values, options).values()
            out[label] = replace(spec, label=f"fig7:{label}")
        return out
    return preset.specs(base, overlay_values, options)
