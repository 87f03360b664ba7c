"""Exact linear algebra: the fraction-free route against plain elimination."""

import pytest
from fractions import Fraction

from hermsym.gauss import GaussRational as G
from hermsym.linalg import (RankTracker, det_exact, det_gauss_elimination,
                            rank_exact, solve_linear)
from hermsym.sampling import random_small_gauss, rng_from_seed


def test_det_routes_agree():
    rng = rng_from_seed(1)
    for n in (1, 2, 3, 5, 7):
        M = [[random_small_gauss(rng) for _ in range(n)] for _ in range(n)]
        assert (det_exact(M) - det_gauss_elimination(M)).is_zero()


def test_det_singular():
    M = [[G(1), G(2)], [G(2), G(4)]]
    assert det_exact(M).is_zero()
    assert det_gauss_elimination(M).is_zero()


def test_det_complex_entries():
    M = [[G(0, 1), G(1)], [G(1), G(0, 1)]]
    # det = i*i - 1 = -2
    assert det_exact(M) == G(-2)


def test_rank_tracker():
    t = RankTracker(3)
    assert t.add_row([G(1), G(0), G(1)])
    assert not t.add_row([G(2), G(0), G(2)])
    assert t.add_row([G(0), G(Fraction(1, 3)), G(0)])
    assert t.rank == 2
    assert rank_exact([[G(1), G(2)], [G(2), G(4)], [G(0), G(1)]]) == 2


def test_solve_linear():
    assert solve_linear(G(2), G(-4)) == G(2)
    with pytest.raises(ZeroDivisionError):
        solve_linear(G(0), G(1))


def test_det_routes_agree_larger():
    import numpy as np
    rng = rng_from_seed(8)
    for n in (4, 6, 8, 10):
        M = [[random_small_gauss(rng) for _ in range(n)] for _ in range(n)]
        a = det_exact(M)
        b = det_gauss_elimination(M)
        assert (a - b).is_zero()
        f = np.array([[complex(x) for x in row] for row in M])
        assert abs(complex(a) - complex(np.linalg.det(f))) < 1e-8 * max(1.0, abs(complex(a)))


def test_rank_matches_float_rank():
    import numpy as np
    rng = rng_from_seed(9)
    for _ in range(5):
        rows = [[random_small_gauss(rng) for _ in range(5)] for _ in range(3)]
        rows.append([a + b for a, b in zip(rows[0], rows[1])])
        exact = rank_exact(rows)
        f = np.array([[complex(x) for x in r] for r in rows])
        assert exact == np.linalg.matrix_rank(f, tol=1e-9)
