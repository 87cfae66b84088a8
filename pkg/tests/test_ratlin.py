import random
from fractions import Fraction as F

import pytest

from signaldim.ratlin import (
    Matrix,
    dot,
    format_rational,
    kron,
    parse_rational,
    primitive_integer,
    rank,
    solve_affine,
    solve_exact,
    vec,
)


def test_kron_direct_expansion():
    assert kron(vec((1, 0, 1)), vec((1, 0, 1))) == vec((1, 0, 1, 0, 0, 0, 1, 0, 1))


def test_kron_all_ones():
    assert kron(vec((1, 1, 1)), vec((1, 1, 1))) == vec([1] * 9)


def test_kron_identity_case():
    a = vec((3, F(-1, 2), 7))
    assert kron(a, vec((1,))) == a


def test_kron_bilinear():
    rng = random.Random(7)
    for _ in range(50):
        la, lb = rng.randint(1, 4), rng.randint(1, 4)
        a = vec([F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(la)])
        a2 = vec([F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(la)])
        b = vec([F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(lb)])
        lhs = kron(tuple(x + y for x, y in zip(a, a2)), b)
        rhs = tuple(x + y for x, y in zip(kron(a, b), kron(a2, b)))
        assert lhs == rhs


def test_rank_identity():
    assert rank(Matrix.identity(3)) == 3


def test_rank_dependent_rows():
    assert rank(Matrix.from_rows([[1, 2, 3], [2, 4, 6]])) == 1


def test_rank_entangled_effect_family():
    # rank of {E_16..E_23, E_0}: frozen from an independent elimination oracle
    from signaldim.models import entangled_effect, _product_effects

    rows = [entangled_effect(x) for x in range(16, 24)] + [_product_effects()[0]]
    assert rank(Matrix.from_rows(rows)) == 6
    assert _oracle_rank([list(r) for r in rows]) == 6


def _oracle_rank(rows):
    """Plain fraction Gauss-Jordan, independent of the Bareiss path."""
    rows = [[F(x) for x in r] for r in rows]
    r = 0
    for c in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def test_rank_equals_transpose_rank():
    rng = random.Random(11)
    for _ in range(30):
        m, n = rng.randint(1, 10), rng.randint(1, 10)
        M = Matrix.from_rows(
            [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        )
        assert rank(M) == rank(M.transpose())


def test_solve_identity():
    b = vec((3, F(1, 2), -2))
    assert solve_exact(Matrix.identity(3), b) == b


def test_solve_underdetermined():
    A = Matrix.from_rows([[1, 1]])
    x = solve_exact(A, vec((1,)))
    assert x is not None and sum(x) == 1


def test_solve_inconsistent():
    A = Matrix.from_rows([[1], [1]])
    assert solve_exact(A, vec((0, 1))) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_exact(Matrix.identity(2), vec((1, 2, 3)))


def test_solve_affine_nullspace():
    A = Matrix.from_rows([[1, 1, 0], [0, 0, 1]])
    x0, basis = solve_affine(A, vec((1, 2)))
    assert A.matvec(x0) == vec((1, 2))
    assert len(basis) == 1
    assert A.matvec(basis[0]) == vec((0, 0))


def test_exactness_roundtrip():
    rng = random.Random(3)
    for _ in range(200):
        a = F(rng.randint(-99, 99), rng.randint(1, 99))
        b = F(rng.randint(-99, 99), rng.randint(1, 99))
        assert (a + b) - b == a
        if b != 0:
            assert (a * b) / b == a


def test_rational_serialization():
    assert format_rational(F(3)) == "3"
    assert format_rational(F(-1, 2)) == "-1/2"
    assert parse_rational("8/3") == F(8, 3)
    assert parse_rational("-7") == F(-7)
    rng = random.Random(5)
    for _ in range(50):
        x = F(rng.randint(-1000, 1000), rng.randint(1, 1000))
        assert parse_rational(format_rational(x)) == x


def test_primitive_integer():
    assert primitive_integer(vec((F(1, 2), F(1, 3)))) == (3, 2)
    assert primitive_integer(vec((2, 4, 6))) == (1, 2, 3)


def test_matrix_inverse_transpose():
    M = Matrix.from_rows([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    I = Matrix.identity(3)
    assert M.matmul(M.inverse()) == I
    assert M.inverse_transpose().transpose().matmul(M) == I


def test_dot_mismatch():
    with pytest.raises(ValueError):
        dot(vec((1, 2)), vec((1, 2, 3)))
