import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gameredesign.catalog import make_pd, make_rps, make_vd
from gameredesign.designer import interior_design, threshold
from gameredesign.game import (
    NormalFormGame,
    dominance_gap,
    from_document,
    is_zero_sum,
    loss_at,
    match_count,
    to_document,
)


def test_loss_at_table_values():
    assert tuple(loss_at(make_pd().game, (0, 0))) == (2.0, 2.0)
    assert tuple(loss_at(make_rps().game, (0, 0))) == (0.0, 0.0)
    assert tuple(loss_at(make_vd(3).game, (0, 0, 0))) == (0.0, 0.0, 0.0)


def test_loss_at_rejects_bad_profiles():
    game = make_pd().game
    with pytest.raises(ValueError):
        loss_at(game, (0, 2))
    with pytest.raises(ValueError):
        loss_at(game, (0,))
    with pytest.raises(ValueError):
        loss_at(game, (-1, 0))


def test_loss_at_is_pure():
    game = make_rps().game
    first = loss_at(game, (1, 2)).copy()
    for _ in range(3):
        assert np.array_equal(loss_at(game, (1, 2)), first)


def test_losses_are_read_only():
    game = make_pd().game
    with pytest.raises(ValueError):
        game.losses[0, 0, 0] = 9.0


def test_match_count():
    assert match_count((1, 2, 3), (1, 2, 3)) == 3
    assert match_count((0, 0, 0), (1, 1, 1)) == 0
    assert match_count((1, 0, 0), (1, 1, 1)) == 1
    with pytest.raises(ValueError):
        match_count((1, 2), (1, 2, 3))


@given(st.lists(st.integers(0, 4), min_size=1, max_size=6), st.data())
def test_match_count_symmetric_and_full(a, data):
    b = data.draw(st.lists(st.integers(0, 4), min_size=len(a), max_size=len(a)))
    assert match_count(a, a) == len(a)
    assert match_count(a, b) == match_count(b, a)


def test_is_zero_sum():
    assert is_zero_sum(make_rps().game)
    assert not is_zero_sum(make_pd().game)
    zero = NormalFormGame(np.zeros((2, 3, 2)), -1.0, 1.0)
    assert is_zero_sum(zero, tol=0.0)
    with pytest.raises(ValueError):
        is_zero_sum(zero, tol=-1.0)


def test_is_zero_sum_ignores_enumeration_order():
    rng = np.random.default_rng(3)
    x = rng.uniform(-1, 1, size=(3, 4))
    losses = np.stack([x, -x], axis=-1)
    game = NormalFormGame(losses, -1.0, 1.0)
    permuted = NormalFormGame(losses[::-1, rng.permutation(4)], -1.0, 1.0)
    assert is_zero_sum(game) and is_zero_sum(permuted)
    losses2 = losses.copy()
    losses2[2, 1, 0] += 0.5
    bad = NormalFormGame(np.clip(losses2, -1, 1), -1.0, 1.0)
    flipped = NormalFormGame(bad.losses[::-1, ::-1], -1.0, 1.0)
    assert is_zero_sum(bad) == is_zero_sum(flipped) is False


def brute_force_gap(game, player, target_action):
    best = math.inf
    counts = game.action_counts
    for a in itertools.product(*(range(n) for n in counts)):
        if a[player] == target_action:
            continue
        b = list(a)
        b[player] = target_action
        best = min(best, game.losses[a][player] - game.losses[tuple(b)][player])
    return best


def test_dominance_gap_thresholded_vd_is_two_thirds():
    p = make_vd(3)
    designed = threshold(interior_design(p.game, p.target, 1.0), p.game, p.target)
    for i in range(3):
        assert dominance_gap(designed, i, 0) == pytest.approx(2 / 3, abs=1e-12)


def test_dominance_gap_interior_pd_is_half():
    p = make_pd()
    designed = interior_design(p.game, p.target, 1.0)
    assert dominance_gap(designed, 0, 0) == pytest.approx(0.5, abs=1e-12)
    assert dominance_gap(designed, 1, 0) == pytest.approx(0.5, abs=1e-12)


def test_dominance_gap_original_pd_negative():
    # fink beats mum against either opponent action
    assert dominance_gap(make_pd().game, 0, 0) < 0


def test_dominance_gap_single_action_is_inf():
    game = NormalFormGame(np.zeros((1, 3, 2)), 0.0, 1.0)
    assert dominance_gap(game, 0, 0) == math.inf


def test_dominance_gap_matches_brute_force():
    rng = np.random.default_rng(11)
    for counts in [(2, 3), (3, 2, 2), (4, 4)]:
        game = NormalFormGame(rng.uniform(0, 1, size=(*counts, len(counts))), 0.0, 1.0)
        for i, n in enumerate(counts):
            for a in range(n):
                assert dominance_gap(game, i, a) == pytest.approx(brute_force_gap(game, i, a), abs=1e-15)


def test_validation():
    with pytest.raises(ValueError):
        NormalFormGame(np.zeros((2, 2, 2)), 1.0, 1.0)
    with pytest.raises(ValueError):
        NormalFormGame(np.full((2, 2, 2), 3.0), 0.0, 1.0)
    with pytest.raises(ValueError):
        NormalFormGame(np.zeros((2, 2, 3)), 0.0, 1.0)
    with pytest.raises(ValueError):
        NormalFormGame(np.zeros((2, 2, 2)), -1.0, 1.0, natural_values=(0.0, 1.0))


def test_cell_index_is_row_major():
    game = make_vd(3).game
    assert game.strides == (4, 2, 1)
    for idx, a in enumerate(game.profiles()):
        assert game.cell_index(a) == idx
        assert game.profile(idx) == a


def test_document_round_trip():
    for game in (make_rps().game, make_vd(3).game):
        doc = to_document(game)
        back = from_document(doc)
        assert np.array_equal(back.losses, game.losses)
        assert back.natural_values == game.natural_values
        assert back.action_names == game.action_names
        assert to_document(back) == doc


def test_document_rejects_unknown_and_bad_shape():
    doc = to_document(make_pd().game)
    with pytest.raises(ValueError):
        from_document({**doc, "extra": 1})
    with pytest.raises(ValueError):
        from_document({**doc, "action_counts": [2, 3]})
