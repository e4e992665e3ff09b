"""Tests for data models."""

import math

import pytest
from pydantic import ValidationError

from gauss_summation.models import (
    Command,
    ConvergenceReport,
    ConvergenceStatus,
    JacobiMatrix,
    OutputFormat,
    PartialSumSequence,
    PolyEvalPoint,
    RecurrenceCoefficients,
    RunConfig,
    Side,
    Summand,
    SummationRule,
    ZeroSet,
)


class TestSummationRule:
    """Test SummationRule model."""

    def test_rule_creation(self):
        """Test basic rule creation."""
        rule = SummationRule(n=2, nodes=(0.25, 1.0), weights=(1.0, 2.0))

        assert rule.n == 2
        assert rule.pseudo_indices == (2.0, 1.0)

    @pytest.mark.parametrize(
        "nodes,weights",
        [
            ((0.5,), (1.0, 1.0)),
            ((0.0, 1.0), (1.0, 1.0)),
            ((1.0, 0.5), (1.0, 1.0)),
            ((0.5, 0.5), (1.0, 1.0)),
            ((0.5, 1.0), (1.0, -1.0)),
            ((0.5, math.nan), (1.0, 1.0)),
        ],
    )
    def test_invariants(self, nodes, weights):
        """Test that malformed rules are rejected."""
        with pytest.raises(ValidationError):
            SummationRule(n=2, nodes=nodes, weights=weights)

    def test_frozen(self):
        """Test that rules cannot be modified."""
        rule = SummationRule(n=1, nodes=(0.5,), weights=(1.0,))
        with pytest.raises(ValidationError):
            rule.n = 2


class TestRecurrenceModels:
    """Test recurrence and Jacobi matrix models."""

    def test_coefficients(self):
        """Test coefficient length and sign checks."""
        coeffs = RecurrenceCoefficients(a=(1.0, 2.0), b=(3.0, 4.0))
        assert coeffs.size == 2
        with pytest.raises(ValidationError):
            RecurrenceCoefficients(a=(1.0,), b=(3.0, 4.0))
        with pytest.raises(ValidationError):
            RecurrenceCoefficients(a=(1.0, 2.0), b=(3.0, 0.0))

    def test_jacobi_shape(self):
        """Test that the off-diagonal is one shorter than the diagonal."""
        assert JacobiMatrix(diag=(1.0, 2.0), offdiag=(0.5,)).order == 2
        with pytest.raises(ValidationError):
            JacobiMatrix(diag=(1.0, 2.0))
        with pytest.raises(ValidationError):
            JacobiMatrix(diag=())


class TestPolyEvalPoint:
    """Test the x/z argument pair."""

    def test_constructors_agree(self):
        """Test that from_x and from_z describe the same point."""
        point = PolyEvalPoint.from_z(0.25)
        assert point.x == pytest.approx(2.0 * math.pi)
        assert PolyEvalPoint.from_x(point.x).z == pytest.approx(0.25)

    def test_inconsistent_pair(self):
        """Test that unrelated x and z are rejected."""
        with pytest.raises(ValidationError):
            PolyEvalPoint(x=1.0, z=1.0)


class TestSequences:
    """Test report and sequence models."""

    def test_convergence_report_value(self):
        """Test that value picks the entry at n_used."""
        report = ConvergenceReport(
            values=(1.0, 1.5, 1.6),
            deltas=(0.5, 0.1),
            n_used=3,
            status=ConvergenceStatus.HIT_N_MAX,
        )
        assert report.value == 1.5

    def test_partial_sum_lookup(self):
        """Test lookups of sampled and missing term counts."""
        seq = PartialSumSequence(
            parameter=2.0, n_values=(1, 4), values=(0.3, 0.4), count=2
        )
        assert seq.at(4) == 0.4
        assert seq.at(2) is None

    def test_partial_sum_count(self):
        """Test that count must match the values."""
        with pytest.raises(ValidationError):
            PartialSumSequence(parameter=2.0, n_values=(1,), values=(0.3,), count=2)
        with pytest.raises(ValidationError):
            PartialSumSequence(
                parameter=2.0, n_values=(1,), values=(math.inf,), count=1
            )

    def test_zero_set_ascending(self):
        """Test that zeros must increase."""
        with pytest.raises(ValidationError):
            ZeroSet(n=2, nu=6.5, x=(2.0, 1.0), tau=(0.3, 0.1), sigma=(0.1, 0.3))


class TestSummandAndRunConfig:
    """Test Summand and RunConfig models."""

    def test_summand_defaults(self):
        """Test that summands are two-sided by default."""
        s = Summand(g=math.cos)
        assert s.side == Side.TWO_SIDED
        assert s.g(0.0) == 1.0

    def test_run_config_defaults(self):
        """Test default run settings."""
        config = RunConfig(command=Command.SUM)
        assert config.n_max == 64
        assert config.tolerance == 1e-12
        assert config.output_format == OutputFormat.CSV
        assert config.richardson_orders == (4,)
        assert config.use_cache

    @pytest.mark.parametrize(
        "field,value",
        [
            ("n", 0),
            ("n", 257),
            ("n_max", 1),
            ("tolerance", 0.0),
            ("a_values", (-1.0,)),
            ("x_values", (math.inf,)),
            ("richardson_orders", (0,)),
            ("max_workers", 0),
        ],
    )
    def test_run_config_ranges(self, field, value):
        """Test that out-of-range settings are rejected."""
        with pytest.raises(ValidationError):
            RunConfig(command=Command.RULE, **{field: value})

    def test_command_values(self):
        """Test that bench commands carry their prefix."""
        assert Command("bench_hl") == Command.BENCH_HL
        assert OutputFormat("json") == OutputFormat.JSON
