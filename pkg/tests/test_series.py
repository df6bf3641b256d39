import random

import pytest

from convnc import (
    Matrix,
    MatrixSeries,
    NotExpandableError,
    RationalSeries,
    block_toeplitz,
    neumann_expand,
    nilpotency,
)
from convnc.network import k0_matrix

from oracles import convolve, poly_matrix_product

# ---------------------------------------------------------
# rational series: canonical form and ring operations
# ---------------------------------------------------------

def test_normalized_form_reduces_and_scales(gf5):
    # (2 + 2z) / (2 + 4z) reduces then rescales the denominator to 1 + 2z
    r = RationalSeries(gf5, (2, 2), (2, 4))
    assert r.den[0] == 1
    # common z^2 factor cancels: equal series compare equal structurally
    assert RationalSeries(gf5, (0, 0, 1, 1), (0, 0, 1)) == RationalSeries(gf5, (1, 1))


def test_zero_constant_denominator_rejected(gf2):
    with pytest.raises(ValueError, match="constant term"):
        RationalSeries(gf2, (1,), (0, 1))
    with pytest.raises(ZeroDivisionError):
        RationalSeries(gf2, (1,), ())


def test_characteristic_two_square(gf2):
    one_plus_z = RationalSeries(gf2, (1, 1))
    assert one_plus_z * one_plus_z == RationalSeries(gf2, (1, 0, 1))


def test_geometric_pieces_sum_to_one(gf2):
    a = RationalSeries(gf2, (1,), (1, 1))      # 1/(1-z)
    b = RationalSeries(gf2, (0, 1), (1, 1))    # z/(1-z)
    total = a + b
    assert total == RationalSeries.one(gf2)
    # expansion agreement at the first 8 terms, term by term
    lhs = [gf2.add(x, y) for x, y in zip(a.expand(7), b.expand(7))]
    assert lhs == list(total.expand(7))


def test_one_is_multiplicative_identity(gf4):
    rng = random.Random(3)
    one = RationalSeries.one(gf4)
    for _ in range(20):
        k = RationalSeries(
            gf4,
            [rng.randrange(4) for _ in range(3)],
            [1] + [rng.randrange(4) for _ in range(2)],
        )
        assert one * k == k


def test_expand_geometric_series(gf2):
    assert RationalSeries(gf2, (1,), (1, 1)).expand(4) == (1, 1, 1, 1, 1)
    assert RationalSeries(gf2, (0, 1), (1, 1)).expand(3) == (0, 1, 1, 1)
    assert RationalSeries.one(gf2).expand(5) == (1, 0, 0, 0, 0, 0)


def test_expansion_of_product_is_convolution(gf2, gf4):
    rng = random.Random(17)
    for field in (gf2, gf4):
        for _ in range(30):
            a = RationalSeries(
                field,
                [rng.randrange(field.order) for _ in range(rng.randint(1, 4))],
                [1] + [rng.randrange(field.order) for _ in range(rng.randint(0, 3))],
            )
            b = RationalSeries(
                field,
                [rng.randrange(field.order) for _ in range(rng.randint(1, 4))],
                [1] + [rng.randrange(field.order) for _ in range(rng.randint(0, 3))],
            )
            horizon = rng.randint(0, 16)
            direct = (a * b).expand(horizon)
            assert list(direct) == convolve(field, a.expand(horizon), b.expand(horizon), horizon)


def test_mixed_field_series_rejected(gf2, gf4):
    with pytest.raises(ValueError, match="mixed fields"):
        RationalSeries.one(gf2) + RationalSeries.one(gf4)


# ---------------------------------------------------------
# matrix series
# ---------------------------------------------------------

def _series_from_strings(field, entries, horizon):
    from convnc import parse_rational

    grid = [[parse_rational(cell, field) for cell in row] for row in entries]
    return MatrixSeries.from_rational(grid, horizon)


def test_polynomial_matrix_coefficient_split(gf2):
    # [[1, 1+z^2], [0, 1+z]] splits into constant, z, and z^2 parts
    series = _series_from_strings(gf2, [["1", "1+z^2"], ["0", "1+z"]], 2)
    assert series.coeffs[0] == Matrix(gf2, [[1, 1], [0, 1]])
    assert series.coeffs[1] == Matrix(gf2, [[0, 0], [0, 1]])
    assert series.coeffs[2] == Matrix(gf2, [[0, 1], [0, 0]])


def test_identity_series_is_neutral(gf2):
    rng = random.Random(5)
    eye = MatrixSeries.identity(gf2, 2, 3)
    b = MatrixSeries(
        [Matrix(gf2, [[rng.randrange(2) for _ in range(2)] for _ in range(2)]) for _ in range(4)]
    )
    assert eye @ b == b


def test_square_of_kernel_matches_polynomial_oracle(gf2):
    series = _series_from_strings(gf2, [["1", "1+z^2"], ["0", "1+z"]], 2)
    squared = series @ series
    grids = [[list(r) for r in c.data] for c in series.coeffs]
    expected = poly_matrix_product(gf2, grids, grids, 2)
    assert [[list(r) for r in c.data] for c in squared.coeffs] == expected


def test_random_products_match_polynomial_oracle(gf2):
    rng = random.Random(23)
    for _ in range(25):
        a = MatrixSeries(
            [Matrix(gf2, [[rng.randrange(2) for _ in range(2)] for _ in range(2)]) for _ in range(5)]
        )
        b = MatrixSeries(
            [Matrix(gf2, [[rng.randrange(2) for _ in range(2)] for _ in range(2)]) for _ in range(5)]
        )
        got = a @ b
        expected = poly_matrix_product(
            gf2,
            [[list(r) for r in c.data] for c in a.coeffs],
            [[list(r) for r in c.data] for c in b.coeffs],
            4,
        )
        assert [[list(r) for r in c.data] for c in got.coeffs] == expected


def test_series_equality_is_horizon_aware(gf2):
    eye2 = MatrixSeries.identity(gf2, 2, 2)
    eye5 = MatrixSeries.identity(gf2, 2, 5)
    assert eye2 == eye5
    bumped = MatrixSeries(list(eye5.coeffs[:5]) + [Matrix(gf2, [[1, 0], [0, 0]])])
    assert eye2 != bumped


def test_series_product_dimension_mismatch(gf2):
    a = MatrixSeries.identity(gf2, 2, 1)
    wide = MatrixSeries([Matrix(gf2, [[1, 0]])] * 2)
    assert (wide @ a).rows == 1
    with pytest.raises(ValueError, match="shape mismatch"):
        a @ wide


# ---------------------------------------------------------
# nilpotency
# ---------------------------------------------------------

def test_overlapping_cycle_constants_are_nilpotent_index_4(overlapping_cycles):
    report = nilpotency(k0_matrix(overlapping_cycles))
    assert report.nilpotent and report.index == 4


def test_mixing_ring_constants_are_not_nilpotent(mixing_ring):
    report = nilpotency(k0_matrix(mixing_ring))
    assert not report.nilpotent and report.index is None


def test_zero_matrix_nilpotent_index_one(gf2):
    assert nilpotency(Matrix.zeros(gf2, 4, 4)).index == 1


def test_partial_power_sums_stabilize_iff_nilpotent(gf2, gf4):
    # sum_{j<=k} K^j becomes stationary below dimension n exactly for
    # nilpotent K
    rng = random.Random(31)
    for field in (gf2, gf4):
        for _ in range(40):
            n = rng.randint(2, 5)
            k = Matrix(field, [[rng.randrange(field.order) for _ in range(n)] for _ in range(n)])
            total = Matrix.identity(field, n)
            power = Matrix.identity(field, n)
            stabilized = False
            for _ in range(n):
                power = power @ k
                if power.is_zero:
                    stabilized = True
                    break
                total = total + power
            assert stabilized == nilpotency(k).nilpotent


# ---------------------------------------------------------
# Neumann expansion
# ---------------------------------------------------------

def test_zero_kernel_expands_to_identity(gf2):
    kernel = MatrixSeries.zeros(gf2, 3, 3, 4)
    assert neumann_expand(kernel, 4) == MatrixSeries.identity(gf2, 3, 4)


def test_constant_coefficient_is_power_sum(gf2, overlapping_cycles):
    k0 = k0_matrix(overlapping_cycles)
    kernel = MatrixSeries([k0] + [Matrix.zeros(gf2, 6, 6)] * 3)
    expansion = neumann_expand(kernel, 3)
    expected = Matrix.identity(gf2, 6)
    power = Matrix.identity(gf2, 6)
    for _ in range(3):  # nilpotency index 4: I + K + K^2 + K^3
        power = power @ k0
        expected = expected + power
    assert expansion.coeffs[0] == expected


def test_neumann_product_is_identity(gf2):
    rng = random.Random(47)
    for _ in range(20):
        coeffs = []
        for t in range(6):
            grid = [[rng.randrange(2) for _ in range(3)] for _ in range(3)]
            if t == 0:  # strictly upper triangular constant part
                for i in range(3):
                    for j in range(i + 1):
                        grid[i][j] = 0
            coeffs.append(Matrix(gf2, grid))
        kernel = MatrixSeries(coeffs)
        expansion = neumann_expand(kernel, 5)
        eye = MatrixSeries.identity(gf2, 3, 5)
        product = (eye + MatrixSeries([-c for c in kernel.coeffs])) @ expansion
        assert product == eye


def test_non_nilpotent_kernel_is_not_expandable(gf2, mixing_ring):
    k0 = k0_matrix(mixing_ring)
    kernel = MatrixSeries([k0] + [Matrix.zeros(gf2, 6, 6)] * 2)
    with pytest.raises(NotExpandableError, match="not nilpotent"):
        neumann_expand(kernel, 2)


# ---------------------------------------------------------
# block Toeplitz stacking
# ---------------------------------------------------------

_F_BLOCKS = [
    [[1, 0], [0, 0]],
    [[0, 0], [1, 0]],
    [[0, 1], [0, 1]],
]


def _blocks(field):
    return [Matrix(field, g) for g in _F_BLOCKS]


def test_stacking_order_one_matches_display(gf2):
    expansion = block_toeplitz(_blocks(gf2), 1)
    assert expansion.matrix == Matrix(
        gf2,
        [
            [1, 0, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 0],
        ],
    )
    assert expansion.matrix.rank() == 2


def test_stacking_order_two_matches_display(gf2):
    expansion = block_toeplitz(_blocks(gf2), 2)
    assert expansion.matrix == Matrix(
        gf2,
        [
            [1, 0, 0, 0, 0, 1],
            [0, 0, 1, 0, 0, 1],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 0],
        ],
    )
    assert expansion.matrix.rank() == 4


def test_stacking_order_zero_is_first_block(gf2):
    assert block_toeplitz(_blocks(gf2), 0).matrix == _blocks(gf2)[0]


def test_stacking_recursive_submatrix(gf2):
    rng = random.Random(61)
    blocks = [
        Matrix(gf2, [[rng.randrange(2) for _ in range(3)] for _ in range(2)])
        for _ in range(4)
    ]
    for delay in range(1, 4):
        big = block_toeplitz(blocks, delay).matrix
        small = block_toeplitz(blocks, delay - 1).matrix
        trimmed = Matrix(
            gf2, [row[3:] for row in big.data[2:]]
        )
        assert trimmed == small


def test_stacking_input_validation(gf2):
    with pytest.raises(ValueError, match="non-negative"):
        block_toeplitz(_blocks(gf2), -1)
    with pytest.raises(ValueError, match="blocks"):
        block_toeplitz(_blocks(gf2), 3)
