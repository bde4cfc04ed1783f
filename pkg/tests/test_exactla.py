from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from tiltquiver import _kernels_py, kernels
from tiltquiver.exactla import (GF, QQ, Field, FieldError, Mat, block_diag, complement_basis, hstack, inverse,
                                kernel_basis, rank, rref_rows, solve, vstack)


def matrices(max_rows=5, max_cols=5, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def naive_rref(rows):
    """Textbook Gauss-Jordan over Fractions, used as an independent oracle."""
    a = [[Fraction(x) for x in r] for r in rows]
    nr, nc = len(a), len(a[0])
    piv, r = [], 0
    for c in range(nc):
        k = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == nr:
            break
    return a[:r], piv


@given(matrices())
def test_rank_nullity_over_Q(rows):
    m = Mat.from_rows(rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_nullity_over_Fp(rows, p):
    f = GF(p)
    m = Mat(f, len(rows), len(rows[0]), rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(matrices())
def test_rref_matches_textbook_elimination(rows):
    red, piv = rref_rows(rows, len(rows[0]), QQ)
    ored, opiv = naive_rref(rows)
    assert piv == opiv
    assert [list(r) for r in red] == ored


@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(Mat.from_rows(rows)) == sympy.Matrix(rows).rank()


@given(matrices(), st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_solve_recovers_consistent_systems(rows, xs):
    m = Mat.from_rows(rows)
    x = xs[:m.ncols]
    b = Mat.from_columns([m.apply(x)], m.nrows)
    sol = solve(m, b)
    assert sol is not None
    assert m @ sol == b


def test_solve_reports_inconsistency():
    m = Mat.from_rows([[1, 0], [1, 0]])
    b = Mat.from_rows([[1], [2]])
    assert solve(m, b) is None
    with pytest.raises(ValueError):
        solve(m, Mat.from_rows([[1]]))


@given(matrices(4, 4, -3, 3))
def test_inverse_of_invertible(rows):
    n = min(len(rows), len(rows[0]))
    m = Mat.from_rows([r[:n] for r in rows[:n]])
    if rank(m) < n:
        return
    assert m @ inverse(m) == Mat.identity(n)


@given(matrices(6, 6, -50, 50))
def test_backends_agree(rows):
    nc = len(rows[0])
    py = _kernels_py.rref_int([list(r) for r in rows], nc)
    assert kernels.rref_int([list(r) for r in rows], nc) == py
    for p in (2, 3, 101):
        mod = [[x % p for x in r] for r in rows]
        assert kernels.rref_mod([list(r) for r in mod], nc, p) == _kernels_py.rref_mod([list(r) for r in mod], nc, p)


def test_field_descriptors():
    assert Field.from_name("Q") == QQ
    f = Field.from_name("Fp7")
    assert f.p == 7 and f.name == "Fp7"
    assert f.inv(3) * 3 % 7 == 1
    assert f(Fraction(1, 2)) == 4
    assert QQ.format(Fraction(-3, 4)) == "-3/4"
    assert QQ.parse("-3/4") == Fraction(-3, 4)
    with pytest.raises(FieldError):
        GF(6)
    with pytest.raises(FieldError):
        Field.from_name("R")


def test_stacking_and_complements():
    a = Mat.from_rows([[1, 2]])
    b = Mat.from_rows([[3, 4]])
    assert vstack([a, b]) == Mat.from_rows([[1, 2], [3, 4]])
    assert hstack([a, b]) == Mat.from_rows([[1, 2, 3, 4]])
    assert block_diag([a, b]).shape == (2, 4)
    comp = complement_basis([[1, 1, 0]], 3, QQ)
    assert len(comp) == 2
    assert rank(Mat.from_rows([[1, 1, 0]] + [list(c) for c in comp])) == 3
