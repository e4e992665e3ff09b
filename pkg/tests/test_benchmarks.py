"""Tests for the benchmark computations."""

import math

import pytest

from gauss_summation.benchmarks import (
    GAUTSCHI_TARGET,
    HL_PUBLISHED,
    HL_PUBLISHED_X,
    LAPLACE_EVALUATIONS,
    coth_error_curve,
    coth_relative_error,
    error_law_slope,
    gautschi_comparison,
    geometric_grid,
    hl_error_table,
    hl_relative_error,
    richardson_curves,
)
from gauss_summation.exceptions import ArgumentError

AGREEMENT_FACTOR = 100.0
RESOLVED = 1e-12


class TestHardyLittlewoodTable:
    """Test relative errors for H(x) against the published comparison."""

    @pytest.fixture(scope="class")
    def table(self):
        n_values = sorted(HL_PUBLISHED)
        return n_values, hl_error_table(HL_PUBLISHED_X, n_values, max_workers=3)

    def test_matches_published_values(self, table):
        """Every cell agrees with the published error to within a factor 100."""
        n_values, rows = table
        for n, row in zip(n_values, rows):
            for x, ours, published in zip(HL_PUBLISHED_X, row, HL_PUBLISHED[n]):
                where = f"n={n}, x={x}: {ours:.3e} vs {published}"
                if published is None:
                    assert ours <= RESOLVED, where
                elif published >= RESOLVED:
                    ratio = ours / published
                    assert 1.0 / AGREEMENT_FACTOR <= ratio <= AGREEMENT_FACTOR, where
                else:
                    assert ours <= max(AGREEMENT_FACTOR * published, RESOLVED), where

    def test_h40_with_eight_points(self):
        """Eight points give H(40) to better than 1e-7."""
        assert hl_relative_error(40.0, 8) <= 1e-7

    def test_h1_with_two_points(self):
        """Two points already give H(1) to about 1e-8."""
        assert 1e-10 <= hl_relative_error(1.0, 2) <= 1e-7

    def test_table_shape(self):
        """Rows follow n and columns follow x."""
        rows = hl_error_table((1.0, 5.0), [2, 3, 4])
        assert len(rows) == 3
        assert all(len(row) == 2 for row in rows)
        assert rows[0][0] == hl_relative_error(1.0, 2)


class TestGautschiComparison:
    """Test the point count needed for H(40)."""

    def test_few_points_suffice(self):
        """At most eight points reach 2.22e-7."""
        result = gautschi_comparison()
        assert result["gauss_nodes"] <= 8
        assert result["relative_error"] <= GAUTSCHI_TARGET
        assert result["laplace_evaluations"] == LAPLACE_EVALUATIONS == 2730

    def test_unreachable_target(self):
        """A too small n_max is reported."""
        with pytest.raises(ArgumentError):
            gautschi_comparison(n_max=1)


class TestCothErrorLaw:
    """Test the Gaussian error law for the coth sum at a = 1000."""

    @pytest.fixture(scope="class")
    def rows(self):
        return coth_error_curve(1000.0, list(range(90, 260, 10)), max_workers=4)

    def test_reaches_full_precision(self, rows):
        """Some rule in the range is accurate to 1e-12."""
        assert min(error for _, error, _, _ in rows) < 1e-12

    def test_slope_of_log_error(self, rows):
        """ln(error) falls like -4 n^2/(pi a)."""
        slope = error_law_slope(rows)
        assert slope == pytest.approx(-4.0 / (math.pi * 1000.0), rel=0.15)

    def test_rows(self, rows):
        """Rows carry the estimate and its regime flag."""
        n, _, estimate, in_regime = rows[0]
        assert n == 90
        assert estimate > 0.0
        assert in_regime
        assert rows[-1][0] == 250

    def test_slope_needs_points(self):
        """Fewer than three errors in the window is an error."""
        rows = [(2, 0.5, 1.0, False), (3, 1e-20, 1.0, False)]
        with pytest.raises(ArgumentError):
            error_law_slope(rows)


class TestRichardson:
    """Test Richardson curves against the Gaussian rule at a = 1000."""

    def test_gauss_rule_at_200_points(self):
        """200 points give G(1000) to 1e-10."""
        assert coth_relative_error(1000.0, 200) <= 1e-10

    def test_fourth_order_error_turns_up(self):
        """The N = 4 error has an interior minimum on the grid."""
        grid = geometric_grid(250, 16000)
        rows = richardson_curves(1000.0, (4,), grid)
        errors = [row[2][0] for row in rows]

        assert min(errors) < errors[-1]
        assert rows[0][3] is not None
        assert all(row[3] is None for row in rows[1:])

    def test_requires_orders(self):
        """At least one order must be given."""
        with pytest.raises(ArgumentError):
            richardson_curves(1000.0, (), [250])


class TestGeometricGrid:
    """Test the doubling grid."""

    def test_grid(self):
        """Start indices double up to the bound."""
        assert geometric_grid(250, 16000) == [250, 500, 1000, 2000, 4000, 8000, 16000]
        assert geometric_grid(3, 20) == [3, 6, 12]

    @pytest.mark.parametrize("bounds", [(0, 10), (10, 5)])
    def test_invalid_bounds(self, bounds):
        """Bounds must be positive and ordered."""
        with pytest.raises(ArgumentError):
            geometric_grid(*bounds)
