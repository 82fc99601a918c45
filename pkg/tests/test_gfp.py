import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adtcap.gfp import (
    ContractError,
    DependencySolution,
    FieldSpec,
    FMatrix,
    check_forward,
    find_removable_input,
    rank,
    solve_dependency,
)
from helpers import det_leibniz, naive_rank, random_full_rank, span_rank

PRIMES = [2, 3, 5]


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return FMatrix.from_rows(rows, p, c)


def test_field_must_be_prime():
    assert FieldSpec().p == 2
    FieldSpec(7)
    for bad in (0, 1, 4, 9, 15):
        with pytest.raises(ContractError):
            FieldSpec(bad)


def test_entries_must_lie_in_field():
    with pytest.raises(ContractError):
        FMatrix(((0, 3),), 2, FieldSpec(3))


# -- rank ------------------------------------------------------------------------------


def test_rank_identity():
    assert rank(FMatrix.identity(3)) == 3


def test_rank_duplicate_rows():
    assert rank(FMatrix.from_rows([[1, 1], [1, 1]], 2)) == 1


def test_rank_empty():
    assert rank(FMatrix.from_rows([], 3, 0)) == 0
    assert rank(FMatrix.from_rows([], 3, 4)) == 0


def test_rank_random_6x6_f5_matches_naive_elimination():
    rng = random.Random(5)
    for _ in range(50):
        rows = [[rng.randrange(5) for _ in range(6)] for _ in range(6)]
        assert rank(FMatrix.from_rows(rows, 5)) == naive_rank(rows, 5)


def test_rank_small_matches_span_enumeration():
    rng = random.Random(11)
    for p in PRIMES:
        for _ in range(20):
            rows = [[rng.randrange(p) for _ in range(4)] for _ in range(rng.randint(1, 4))]
            assert rank(FMatrix.from_rows(rows, p)) == span_rank(rows, p)


@given(matrices())
def test_rank_equals_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())


@given(matrices())
def test_rank_agrees_with_reference(m):
    assert rank(m) == naive_rank(m.entries, m.field.p)


# -- solve_dependency -------------------------------------------------------------------


def test_solve_identity_reads_coordinates():
    sol = solve_dependency(FMatrix.identity(3), [1, 0, 1])
    assert sol == DependencySolution((0, 2), (1, 1))


def test_solve_zero_target_is_empty_combination():
    sol = solve_dependency(FMatrix.identity(2), [0, 0])
    assert sol.lam == () and sol.coeffs == ()


def test_solve_recovers_planted_combination_f3():
    rng = random.Random(3)
    for _ in range(20):
        while True:
            rows = [[rng.randrange(3) for _ in range(6)] for _ in range(4)]
            if naive_rank(rows, 3) == 4:
                break
        target = [(2 * a + b) % 3 for a, b in zip(rows[1], rows[3])]
        sol = solve_dependency(FMatrix.from_rows(rows, 3), target)
        assert sol.lam == (1, 3) and sol.coeffs == (2, 1)


def test_solve_reports_independent_target():
    assert solve_dependency(FMatrix.from_rows([[1, 0, 0]], 2), [0, 1, 0]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ContractError):
        solve_dependency(FMatrix.identity(2), [1, 0, 0])


def test_solve_rejects_rank_deficient_basis():
    with pytest.raises(ContractError):
        solve_dependency(FMatrix.from_rows([[1, 1], [1, 1]], 2), [1, 1])


@given(st.data())
def test_solve_round_trip_and_uniqueness(data):
    p = data.draw(st.sampled_from(PRIMES))
    k = data.draw(st.integers(1, 4))
    n = data.draw(st.integers(k, 6))
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    if naive_rank(rows, p) < k:
        return
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=k, max_size=k))
    target = [sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(n)]
    sol = solve_dependency(FMatrix.from_rows(rows, p), target)
    assert sol.as_dict() == {j: c for j, c in enumerate(coeffs) if c}
    rebuilt = [sum(a * rows[j][c] for j, a in sol.as_dict().items()) % p for c in range(n)]
    assert rebuilt == target


# -- check_forward ----------------------------------------------------------------------


def test_check_forward_empty_lambda():
    empty = DependencySolution((), ())
    assert check_forward(empty, [], 1, 2) is True
    assert check_forward(empty, [], 0, 2) is False


def test_check_forward_negative_case():
    sol = DependencySolution((0, 1), (1, 1))
    # t_xy = 1*1 + 1*0 -> dependent column, no rank growth
    assert check_forward(sol, [1, 0], 1, 2) is False
    assert check_forward(sol, [1, 1], 1, 2) is True


@given(st.data())
def test_check_forward_matches_rank_growth(data):
    p = data.draw(st.sampled_from(PRIMES))
    k = data.draw(st.integers(0, 4))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    basis = random_full_rank(rng, k, p) if k else []
    x_row = [rng.randrange(p) for _ in range(k)]
    y_col = [rng.randrange(p) for _ in range(k)]
    t = rng.randrange(p)
    sol = solve_dependency(FMatrix.from_rows(basis, p, k), x_row)
    col = [y_col[j] for j in sol.lam]
    big = [r + [c] for r, c in zip(basis, y_col)] + [x_row + [t]]
    assert check_forward(sol, col, t, p) == (naive_rank(big, p) == k + 1)


# -- find_removable_input -------------------------------------------------------------------


def test_removable_identity():
    assert find_removable_input(FMatrix.identity(2), 0) == 0
    assert find_removable_input(FMatrix.identity(3), 2) == 2


def test_removable_picks_smallest_row():
    m = FMatrix.from_rows([[1, 1], [1, 0]], 2)
    # deleting column 1: row 0 leaves [1], row 1 leaves [1]; both work
    assert find_removable_input(m, 1) == 0
    # deleting column 0: row 0 leaves [0] (singular), row 1 leaves [1]
    assert find_removable_input(m, 0) == 1


def test_removable_rejects_singular():
    with pytest.raises(ContractError):
        find_removable_input(FMatrix.from_rows([[1, 1], [1, 1]], 2), 0)


def test_removable_random_4x4_f2_exhaustive():
    rng = random.Random(2)
    for _ in range(30):
        rows = random_full_rank(rng, 4, 2)
        m = FMatrix.from_rows(rows, 2)
        for y in range(4):
            x = find_removable_input(m, y)
            assert naive_rank(m.delete(x, y).entries, 2) == 3
            assert all(det_leibniz(m.delete(r, y).entries, 2) == 0 for r in range(x))
