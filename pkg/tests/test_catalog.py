import math

import numpy as np
import pytest

from gameredesign.catalog import PRESETS, get_preset, make_pd, make_rps, make_tc, make_vd
from gameredesign.game import loss_at


def test_vd_values():
    g = make_vd(3).game
    assert tuple(loss_at(g, (0, 1, 1))) == (0.0, -1.0, -1.0)
    assert tuple(loss_at(g, (1, 1, 1))) == (10.0, 10.0, 10.0)
    assert tuple(loss_at(g, (0, 0, 1))) == (0.0, 0.0, -1.0)
    assert make_vd(5).game.action_counts == (2,) * 5
    with pytest.raises(ValueError):
        make_vd(1)


def test_tc_values():
    g = make_tc().game
    assert g.action_counts == (16, 16)
    assert loss_at(g, (12, 12))[0] == pytest.approx(-12 * math.sqrt(6), abs=1e-12)
    assert loss_at(g, (10, 10))[1] == pytest.approx(-10 * math.sqrt(10), abs=1e-12)
    assert g.loss_lower == pytest.approx(-15 * math.sqrt(15))


def test_tc_nash_and_welfare():
    g = make_tc().game
    # (12, 12) is a Nash equilibrium: no unilateral deviation lowers own loss
    for b in range(16):
        assert g.losses[b, 12, 0] >= g.losses[12, 12, 0] - 1e-12
        assert g.losses[12, b, 1] >= g.losses[12, 12, 1] - 1e-12
    welfare = g.losses.sum(axis=-1)
    best = np.argwhere(np.isclose(welfare, welfare.min()))
    assert all(a + b == 20 for a, b in best)
    assert [10, 10] in best.tolist()


def test_pd_values():
    g = make_pd().game
    assert tuple(loss_at(g, (0, 1))) == (5.0, 1.0)
    assert tuple(loss_at(g, (1, 1))) == (4.0, 4.0)


def test_rps_values():
    p = make_rps()
    g = p.game
    assert p.target == (0, 1)
    assert tuple(loss_at(g, p.target)) == (1.0, -1.0)
    assert tuple(loss_at(g, (0, 2))) == (-1.0, 1.0)
    assert g.natural_values == (-1.0, 0.0, 1.0)
    assert p.designer.epsilon == 0.3
    assert make_rps(kind="discrete").designer.kind == "discrete"


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_within_bounds(name):
    g = get_preset(name).game
    assert g.losses.min() == pytest.approx(g.loss_lower)
    assert g.losses.max() == pytest.approx(g.loss_upper)


def test_unknown_preset():
    with pytest.raises(ValueError, match="unknown preset"):
        get_preset("chess")
