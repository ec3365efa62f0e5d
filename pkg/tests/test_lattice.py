import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from ahsmooth.errors import CaseMismatchError, DimensionError, DomainError, NoSectionError
from ahsmooth.lattice import (
    IntMatrix,
    WeightData,
    case_parameters,
    cokernel_matrix,
    delta,
    is_section,
    lattice_index,
    rho,
    section_key,
    section_of,
    smith_diagonal,
    smith_normal_form,
)


def test_rho_examples():
    assert rho(2, 6) == 2
    assert rho(2, -6) == 2
    assert rho(7, 1) == 1
    with pytest.raises(DomainError):
        rho(0, 0)


def test_delta_examples():
    assert delta(2, 3, 6) == 1
    assert delta(1, 1, 3) == 1
    # gcd(4/2, 6/2) = gcd(2, 3)
    assert delta(4, 6, 2) == 1
    with pytest.raises(DomainError):
        delta(0, 1, 1)


@pytest.mark.parametrize("a,b,c", [(a, b, c) for a in range(1, 9) for b in range(1, 9) for c in range(1, 9)])
def test_delta_matches_direct_gcd(a, b, c):
    assert delta(a, b, c) == gcd(a // gcd(a, c), b // gcd(b, c))


def _is_diagonal_divisible(s: IntMatrix):
    diag = [s[i, i] for i in range(min(s.shape))]
    off = [s[i, j] for i in range(s.nrows) for j in range(s.ncols) if i != j]
    if any(off) or any(d < 0 for d in diag):
        return False
    nz = [d for d in diag if d]
    return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1)) and diag[: len(nz)] == nz


def _check_snf(m: IntMatrix):
    u, s, v = smith_normal_form(m)
    assert (u @ m @ v).rows == s.rows
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    assert _is_diagonal_divisible(s)
    return s


def test_snf_examples():
    s = _check_snf(IntMatrix.column((2, 3, -6)))
    assert s.flat() == (1, 0, 0)
    assert smith_diagonal(IntMatrix.identity(3)) == (1, 1, 1)
    assert smith_diagonal(IntMatrix([[3, 0, 1], [0, 2, 1]])) == (1, 1)


def _sympy_diag(rows):
    d = sympy_snf(Matrix(rows), domain=ZZ)
    return tuple(abs(int(d[i, i])) for i in range(min(d.shape)))


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda r: st.integers(1, 4).flatmap(
            lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_snf_against_sympy(rows):
    m = IntMatrix(rows)
    s = _check_snf(m)
    ours = tuple(s[i, i] for i in range(min(s.shape)))
    assert ours == _sympy_diag(rows)


def test_section_examples():
    assert section_of((2, 3, -6)) == (-1, 1, 0)
    assert is_section((-1, 1, 0), (2, 3, -6))
    assert section_of((1, 0, 0)) == (1, 0, 0)
    assert section_of((1, 1, -1)) == (0, 0, -1)
    with pytest.raises(NoSectionError):
        section_of((2, 4, 6))


@settings(max_examples=200, deadline=None)
@given(st.tuples(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30)).filter(lambda f: gcd(*f) == 1))
def test_section_is_minimal(f):
    s = section_of(f)
    assert is_section(s, f)
    # brute force: nothing with a smaller key inside the sup-norm ball of s
    r = max(abs(x) for x in s)
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            for z in range(-r, r + 1):
                if is_section((x, y, z), f):
                    assert section_key((x, y, z)) >= section_key(s)


def test_cokernel_examples():
    p, cover = cokernel_matrix((2, 3, -6), 1)
    assert p.rows == ((3, 0, 1), (0, 2, 1)) and cover == 1
    p, cover = cokernel_matrix((0, 0, 1), 5)
    assert p.rows == ((1, 0, 0), (0, 1, 0)) and cover == 1
    p, cover = cokernel_matrix((2, 3, -4), 1)
    assert p.rows == ((2, 0, 1), (0, 4, 3)) and cover == 2
    assert cokernel_matrix((2, 3, 4), 2)[1] == 2


def test_cokernel_case_mismatch():
    with pytest.raises(CaseMismatchError):
        cokernel_matrix((2, 3, 6), 1)
    with pytest.raises(CaseMismatchError):
        case_parameters((0, 1, 1), 4)
    with pytest.raises(DimensionError):
        case_parameters((1, 1), 1)


def _random_f(rng, case):
    while True:
        a, b, c = (rng.randint(1, 50) for _ in range(3))
        f = {1: (a, b, -c), 2: (a, b, c), 3: (0, b, c), 4: (0, b, -c), 5: (0, 0, 1)}[case]
        if gcd(*f) == 1:
            return f


@pytest.mark.parametrize("case", [1, 2, 3, 4, 5])
def test_cokernel_kills_f_and_index_is_minor_gcd(case):
    rng = random.Random(case)
    for _ in range(60):
        f = _random_f(rng, case)
        p, cover = cokernel_matrix(f, case)
        assert (p @ IntMatrix.column(f)).is_zero()
        minors = [p[0, i] * p[1, j] - p[0, j] * p[1, i] for i in range(3) for j in range(i + 1, 3)]
        assert cover == gcd(*minors)


def test_weight_data_validation():
    f = IntMatrix.column((2, 3, -6))
    p, cover = cokernel_matrix((2, 3, -6), 1)
    WeightData(f, IntMatrix.row((-1, 1, 0)), p, cover)
    with pytest.raises(DomainError):
        WeightData(f, IntMatrix.row((1, 1, 0)), p, cover)
    with pytest.raises(DomainError):
        WeightData(f, IntMatrix.row((-1, 1, 0)), p, 2)


def test_lattice_index_of_rank_deficient_matrix():
    assert lattice_index(IntMatrix([[1, 2], [2, 4]])) == 0
