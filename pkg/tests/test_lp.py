from fractions import Fraction

from exlab.lp import gaussian_solve, solve_lp
from exlab.scalars import ONE, SQRT2, ZERO, ScalarQ2


def test_simple_feasible_min():
    # min x0 + x1 s.t. x0 + 2 x1 = 4, x >= 0  -> x = (0, 2)
    res = solve_lp([[1, 2]], [4], [1, 1])
    assert res.status == "optimal"
    assert res.objective == ScalarQ2(2)
    assert res.x == [ZERO, ScalarQ2(2)]


def test_maximize_with_slack():
    # max x0 s.t. x0 + s = 3 -> 3
    res = solve_lp([[1, 1]], [3], [1, 0], maximize=True)
    assert res.status == "optimal"
    assert res.objective == ScalarQ2(3)


def test_infeasible():
    # x0 = -1 with x0 >= 0
    res = solve_lp([[1]], [-1], [0])
    assert res.status == "infeasible"


def test_unbounded():
    # min -x0, x0 - x1 = 0: x0 = x1 -> unbounded below
    res = solve_lp([[1, -1]], [0], [-1, 0])
    assert res.status == "unbounded"


def test_degenerate_and_redundant_rows():
    # duplicated constraint rows must not break phase 2
    res = solve_lp([[1, 1], [1, 1]], [2, 2], [1, 2])
    assert res.status == "optimal"
    assert res.objective == ScalarQ2(2)


def test_exact_fractions():
    # convex combination: find lambda >= 0 with sum = 1 reproducing 2/5
    # columns: 0, 1/2, 1
    A = [[0, Fraction(1, 2), 1], [1, 1, 1]]
    b = [Fraction(2, 5), 1]
    res = solve_lp(A, b, [0, 0, 0])
    assert res.status == "optimal"
    total = sum(
        (c * x for c, x in zip([ZERO, ScalarQ2(Fraction(1, 2)), ONE], res.x)),
        ZERO,
    )
    assert total == ScalarQ2(Fraction(2, 5))


def test_sqrt2_right_hand_side():
    # x0 - x1 = sqrt2 - 1, x0 + x1 = 1 -> x = (sqrt2/2, 1 - sqrt2/2)
    A = [[1, -1], [1, 1]]
    b = [SQRT2 - 1, 1]
    res = solve_lp(A, b, [1, 1])
    assert res.status == "optimal"
    assert res.x[0] == SQRT2 / 2
    assert res.x[1] == ONE - SQRT2 / 2


def test_gaussian_unique():
    status, x, rank = gaussian_solve([[2, 1], [1, -1]], [3, 0])
    assert status == "unique" and rank == 2
    assert x == [ONE, ONE]


def test_gaussian_inconsistent():
    status, x, rank = gaussian_solve([[1, 1], [2, 2]], [1, 3])
    assert status == "inconsistent"


def test_gaussian_underdetermined():
    status, x, rank = gaussian_solve([[1, 1]], [1])
    assert status == "underdetermined" and rank == 1


def test_gaussian_sqrt2_entries():
    status, x, _ = gaussian_solve([[1, 0], [0, 2]], [SQRT2, SQRT2])
    assert status == "unique"
    assert x == [SQRT2, SQRT2 / 2]
