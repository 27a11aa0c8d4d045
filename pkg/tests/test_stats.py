"""Moments, product-moment correlation, and the CSV dialect."""

from fractions import Fraction

import numpy as np
import pytest

from manifoldcorr import (
    CsvFormatError,
    Dataset,
    DegenerateVariance,
    compute_moments,
    make_rng,
    pearson,
    pearson_matrix,
    read_csv,
    write_csv,
)


def _exact_moments(cols):
    """Independent oracle: moment formulas evaluated in exact rationals."""
    cols = [[Fraction(v) for v in c] for c in cols]
    n = len(cols[0])
    means = [sum(c) / n for c in cols]
    cov = [
        [
            sum((a - ma) * (b - mb) for a, b in zip(ca, cb)) / n
            for cb, mb in zip(cols, means)
        ]
        for ca, ma in zip(cols, means)
    ]
    return means, cov


XY = Dataset(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 4.0]]), ("x", "y"))


class TestMoments:
    def test_simple_column(self):
        d = Dataset(np.array([[1.0], [2.0], [3.0]]), ("x",))
        m = compute_moments(d)
        assert m.mean[0] == 2.0
        assert m.variance[0] == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_constant_column(self):
        d = Dataset(np.array([[5.0], [5.0], [5.0], [5.0]]), ("c",))
        assert compute_moments(d).variance[0] == 0.0

    def test_known_two_column(self):
        # oracle: exact rational evaluation of the 1/n moment formulas
        means, cov = _exact_moments([[0, 1, 2, 3], [0, 1, 2, 4]])
        assert cov[0][1] == Fraction(13, 8)          # = 1.625
        assert cov[0][0] == Fraction(5, 4)           # = 1.25
        assert cov[1][1] == Fraction(35, 16)         # = 2.1875
        m = compute_moments(XY)
        assert m.covariance[0, 1] == pytest.approx(1.625, abs=1e-15)
        assert m.variance[0] == pytest.approx(1.25, abs=1e-15)
        assert m.variance[1] == pytest.approx(2.1875, abs=1e-15)

    def test_diagonal_equals_variance_bit_exact(self):
        rng = make_rng(1)
        d = Dataset(rng.standard_normal((50, 4)))
        m = compute_moments(d)
        assert np.array_equal(np.diagonal(m.covariance), m.variance)

    def test_covariance_symmetric_and_psd(self):
        rng = make_rng(2)
        d = Dataset(rng.standard_normal((40, 5)) @ np.diag([1, 2, 3, 0.5, 0.1]))
        m = compute_moments(d)
        assert np.array_equal(m.covariance, m.covariance.T)
        w = np.linalg.eigvalsh(m.covariance)
        assert w.min() >= -1e-10 * np.abs(m.covariance).max()

    def test_single_row_rejected(self):
        d = Dataset(np.array([[1.0, 2.0]]), ("a", "b"))
        with pytest.raises(ValueError):
            compute_moments(d)


class TestPearson:
    def test_perfect_positive_line(self):
        x = np.array([1.0, 2.0, 3.0])
        d = Dataset(np.column_stack([x, 2 * x + 1]), ("x", "y"))
        assert pearson(d, 0, 1) == pytest.approx(1.0, abs=1e-15)

    def test_perfect_negative_line(self):
        x = np.array([1.0, 2.0, 3.0])
        d = Dataset(np.column_stack([x, -x]), ("x", "y"))
        assert pearson(d, 0, 1) == pytest.approx(-1.0, abs=1e-15)

    def test_known_value(self):
        # oracle: rho^2 = cov^2 / (vx vy) = (13/8)^2 / (5/4 * 35/16) = 169/175
        rho_sq = Fraction(13, 8) ** 2 / (Fraction(5, 4) * Fraction(35, 16))
        assert rho_sq == Fraction(169, 175)
        expected = float(Fraction(169, 175)) ** 0.5
        assert pearson(XY, 0, 1) == pytest.approx(expected, abs=1e-12)

    def test_self_correlation_is_one(self):
        assert pearson(XY, 0, 0) == 1.0
        assert pearson(XY, 1, 1) == 1.0

    def test_symmetry_bit_exact(self):
        rng = make_rng(3)
        for trial in range(50):
            d = Dataset(rng.standard_normal((rng.integers(3, 40), 3)))
            assert pearson(d, 0, 2) == pearson(d, 2, 0)

    def test_bounded(self):
        rng = make_rng(4)
        for trial in range(200):
            n = int(rng.integers(3, 60))
            d = Dataset(rng.standard_normal((n, 2)) * rng.uniform(0.1, 10))
            assert abs(pearson(d, 0, 1)) <= 1 + 1e-12

    def test_affine_invariance(self):
        rng = make_rng(5)
        for trial in range(100):
            x = rng.standard_normal(30)
            y = rng.standard_normal(30)
            a, c = rng.uniform(0.1, 5, 2) * rng.choice([-1.0, 1.0], 2)
            b, e = rng.uniform(-10, 10, 2)
            base = pearson(Dataset(np.column_stack([x, y])), 0, 1)
            trans = pearson(Dataset(np.column_stack([a * x + b, c * y + e])), 0, 1)
            assert trans == pytest.approx(np.sign(a * c) * base, abs=1e-12)

    def test_constant_column_raises_with_name(self):
        d = Dataset(np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]]), ("x", "cst"))
        with pytest.raises(DegenerateVariance, match="cst"):
            pearson(d, 0, 1)

    def test_column_by_name(self):
        assert pearson(XY, "x", "y") == pearson(XY, 0, 1)


class TestPearsonMatrix:
    def test_single_column(self):
        d = Dataset(np.array([[1.0], [2.0], [4.0]]), ("x",))
        assert np.array_equal(pearson_matrix(d), np.array([[1.0]]))

    def test_identical_columns(self):
        x = np.array([1.0, 5.0, 2.0, 8.0])
        d = Dataset(np.column_stack([x, x]), ("a", "b"))
        assert pearson_matrix(d) == pytest.approx(np.ones((2, 2)), abs=1e-15)

    def test_matches_pairwise_calls_exactly(self):
        rng = make_rng(6)
        d = Dataset(rng.standard_normal((25, 3)))
        mat = pearson_matrix(d)
        for i in range(3):
            for j in range(3):
                assert mat[i, j] == pearson(d, i, j)

    def test_degenerate_names_column(self):
        vals = np.column_stack([np.arange(4.0), np.full(4, 3.0), np.arange(4.0) ** 2])
        d = Dataset(vals, ("a", "flat", "c"))
        with pytest.raises(DegenerateVariance, match="flat"):
            pearson_matrix(d)


class TestDataset:
    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="non-finite"):
            Dataset(np.array([[1.0, np.nan], [2.0, 3.0]]))

    def test_rejects_duplicate_names(self):
        with pytest.raises(ValueError, match="unique"):
            Dataset(np.zeros((3, 2)) + np.arange(3)[:, None], ("x", "x"))

    def test_immutable(self):
        d = Dataset(np.arange(6.0).reshape(3, 2))
        with pytest.raises(ValueError):
            d.values[0, 0] = 99.0


class TestCsv:
    def test_round_trip_bit_exact(self, tmp_path):
        rng = make_rng(7)
        d = Dataset(rng.standard_normal((20, 3)) * 1e3, ("alpha", "beta", "gamma"))
        path = tmp_path / "data.csv"
        write_csv(path, d)
        back = read_csv(path)
        assert back.column_names == d.column_names
        assert np.array_equal(back.values, d.values)

    def test_non_numeric_cell_names_row_and_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1.0,2.0\n3.0,oops\n")
        with pytest.raises(CsvFormatError, match=r"row 3.*'y'"):
            read_csv(path)

    def test_ragged_row_rejected(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("x,y\n1.0,2.0\n3.0\n")
        with pytest.raises(CsvFormatError, match="row 3"):
            read_csv(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(CsvFormatError):
            read_csv(path)
