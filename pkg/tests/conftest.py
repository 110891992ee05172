import numpy as np
import pytest

from gameredesign.kernel import BACKENDS

ALL_BACKENDS = sorted(BACKENDS)


@pytest.fixture(params=ALL_BACKENDS)
def backend(request):
    return request.param


def random_game(rng, num_players, action_counts, lo=-1.0, hi=1.0):
    from gameredesign.game import NormalFormGame

    losses = rng.uniform(lo, hi, size=(*action_counts, num_players))
    return NormalFormGame(losses, lo, hi)


def random_case(rng, zero_sum=False):
    """Random game, target, interior margin and interior vector for the design property suites.

    With ``zero_sum`` the target losses and ``v`` both sum to zero.
    """
    from gameredesign.game import NormalFormGame

    m = int(rng.integers(2, 5))
    counts = tuple(int(x) for x in rng.integers(2, 6, size=m))
    if zero_sum:
        hi = float(rng.uniform(0.5, 10.0))
        lo = -hi
    else:
        lo = float(rng.uniform(-10.0, 5.0))
        hi = lo + float(rng.uniform(0.5, 20.0))
    rho = float(rng.uniform(0.01, 0.5)) * (hi - lo)
    target = tuple(int(rng.integers(0, n)) for n in counts)

    def interior_vector():
        if zero_sum:
            half = (hi - rho) / m
            x = rng.uniform(-half, half, size=m - 1)
            return np.append(x, -x.sum())
        return rng.uniform(lo + rho, hi - rho, size=m)

    losses = rng.uniform(lo, hi, size=(*counts, m))
    losses[target] = interior_vector()
    game = NormalFormGame(losses, lo, hi)
    return game, target, rho, interior_vector()
