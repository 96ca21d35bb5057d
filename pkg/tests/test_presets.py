import math

import pytest

from magnoqcrb.errors import ConfigValueError, UnknownFieldError
from magnoqcrb.presets import FIG7_AXES, PRESETS, preset_specs

SHAPES = {"fig3a": (51, 51), "fig3c": (51, 51), "fig7": (201,)}


@pytest.mark.parametrize("figid", sorted(PRESETS))
def test_every_preset_builds(figid):
    specs = preset_specs(figid)
    assert specs
    for label, spec in specs.items():
        assert spec.shape == SHAPES.get(figid, (201,))
        assert spec.label.startswith(figid)
        first = next(spec.points())[1]
        assert first.temperature > 0 or figid == "fig7"


def test_overlay_values_are_applied():
    specs = preset_specs("fig3b")
    (r0, t0), (r1, t1) = [(s.base.feedback_r, s.base.feedback_theta) for s in list(specs.values())[::2]]
    assert (r0, t0) == (0.0, 0.0) and (r1, t1) == (0.5, math.pi)
    temps = [s.base.temperature for s in preset_specs("fig2a").values()]
    assert temps == [0.01, 0.1, 0.5]


def test_overlay_replacement_and_validation():
    specs = preset_specs("fig2a", overlay_values=[(0.2,)])
    assert [s.base.temperature for s in specs.values()] == [0.2]
    with pytest.raises(ConfigValueError):
        preset_specs("fig3b", overlay_values=[(0.1,)])
    with pytest.raises(UnknownFieldError):
        preset_specs("fig99")


def test_fig3c_base_and_fig7_axes():
    spec, = preset_specs("fig3c").values()
    assert spec.base.feedback_r == 0.5 and spec.base.feedback_theta == math.pi
    assert set(preset_specs("fig7")) == set(FIG7_AXES) == {"power", "rabi"}


def test_placeholders_flagged():
    assert PRESETS["fig2a"].placeholder and not PRESETS["fig3a"].placeholder
