import random
from fractions import Fraction

import pytest

from geowronskian import linalg
from geowronskian.polyring import random_polynomial


def _rand_matrix(n, rng):
    return [[Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]


def test_rational_methods_agree_with_permutation_sum():
    rng = random.Random(1)
    for n in range(0, 6):
        for _ in range(10):
            M = _rand_matrix(n, rng)
            want = linalg.det_leibniz(M) if n else 1
            for method in ("gauss", "laplace", "bareiss"):
                assert linalg.det(M, method) == want


def test_polynomial_methods_agree():
    rng = random.Random(2)
    for n in range(1, 5):
        M = [[random_polynomial(2, 2, rng, density=0.4) for _ in range(n)] for _ in range(n)]
        want = linalg.det_leibniz(M)
        assert linalg.det(M, "laplace") == want
        assert linalg.det(M, "bareiss") == want


def test_zero_row_and_singular():
    assert linalg.det([[1, 2], [0, 0]]) == 0
    assert linalg.det([[1, 2], [2, 4]]) == 0
    with pytest.raises(ValueError):
        linalg.det([[1, 2]])


def test_rank_and_solve():
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.solve([[2, 0], [0, 4]], [2, 2]) == [1, Fraction(1, 2)]
    with pytest.raises(ValueError, match="underdetermined"):
        linalg.solve([[1, 1]], [1])
    with pytest.raises(ValueError, match="inconsistent"):
        linalg.solve([[1], [1]], [1, 2])
