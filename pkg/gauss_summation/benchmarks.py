"""Benchmark computations behind the bench and zeros commands.

Each function returns plain rows so the command line can write them as CSV
or JSON; parameter points are evaluated on a thread pool and merged in input
order.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from gauss_summation.exceptions import ArgumentError
from gauss_summation.models import Side, Summand, SummationRule
from gauss_summation.reference import (
    coth_closed_form,
    hl_oracle,
    partial_sums_G,
    richardson,
    richardson_indices,
)
from gauss_summation.rule_core import MAX_RULE_SIZE, build_rule
from gauss_summation.summator import (
    apriori_error_coth,
    apriori_error_hl,
    coth_regime,
    gauss_sum,
)

logger = logging.getLogger(__name__)

RuleProvider = Callable[[int], SummationRule]

TABLE_FLOOR = 1e-13
GAUTSCHI_X = 40.0
GAUTSCHI_TARGET = 2.22e-7
LAPLACE_NODES = 39
LAPLACE_EVALUATIONS = 39 * 70

# Relative errors from the published Hardy-Littlewood comparison, rows n = 2..15
# and columns x = 1, 5, 10, 20, 40, 100; None marks errors below 1e-14.
HL_PUBLISHED_X = (1.0, 5.0, 10.0, 20.0, 40.0, 100.0)
HL_PUBLISHED: Dict[int, Tuple[Optional[float], ...]] = {
    2: (8.73e-9, 1.58e-2, 1.9, 4.47e-1, 5.06e-1, 5.61e-1),
    3: (None, 2.53e-6, 1.02e-2, 9.55e-1, 2.29e-1, 3.29),
    4: (None, 3.66e-11, 3.3e-6, 1.67e-2, 1.28, 3.29),
    5: (None, None, 1.47e-10, 2.29e-5, 2.48e-1, 4.51e-1),
    6: (None, None, None, 5.19e-9, 3.04e-3, 2.53),
    7: (None, None, None, 2.85e-13, 5.89e-6, 2.77),
    8: (None, None, None, None, 2.8e-9, 1.09),
    9: (None, None, None, None, 4.19e-13, 4.46e-2),
    10: (None, None, None, None, None, 3.87e-4),
    11: (None, None, None, None, None, 1.02e-6),
    12: (None, None, None, None, None, 1.01e-9),
    13: (None, None, None, None, None, 4.07e-13),
    14: (None, None, None, None, None, 2.51e-14),
    15: (None, None, None, None, None, None),
}


def _map_ordered(fn: Callable, items: Sequence, max_workers: int) -> List:
    if max_workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(fn, items))


def _hl_term(x: float, k: float) -> float:
    return math.sin(x / k) / k


def hl_summand(x: float) -> Summand:
    """H(x) = sum over k >= 1 of sin(x/k)/k as a positive-half summand."""
    return Summand(
        g=partial(_hl_term, x), side=Side.POSITIVE_HALF, description=f"H({x})"
    )


def hl_relative_error(
    x: float, n: int, rule_provider: RuleProvider = build_rule
) -> float:
    """Relative error of the n-point rule for H(x) against hl_oracle."""
    exact = hl_oracle(x)
    value = gauss_sum(rule_provider(n), hl_summand(x))
    return abs(value - exact) / abs(exact)


def _hl_column(
    x: float, n_values: Sequence[int], rule_provider: RuleProvider
) -> List[float]:
    column = [hl_relative_error(x, n, rule_provider) for n in n_values]
    logger.info(f"Finished Hardy-Littlewood column x={x}")
    return column


def hl_error_table(
    x_values: Sequence[float],
    n_values: Sequence[int],
    rule_provider: RuleProvider = build_rule,
    max_workers: int = 1,
) -> List[List[float]]:
    """Relative errors, one row per n and one column per x."""
    columns = _map_ordered(
        partial(_hl_column, n_values=n_values, rule_provider=rule_provider),
        list(x_values),
        max_workers,
    )
    return [[column[i] for column in columns] for i in range(len(n_values))]


def hl_asymptotic_column(x: float, n_values: Sequence[int]) -> List[float]:
    """Asymptotic error estimate for H(x) at each n, without regime warnings."""
    return [apriori_error_hl(n, x, warn=False) for n in n_values]


def _coth_term(a: float, k: float) -> float:
    return 1.0 / (a * a + k * k)


def coth_summand(a: float) -> Summand:
    """Two-sided summand 1/(a^2 + k^2); the k = 0 term is added separately."""
    return Summand(g=partial(_coth_term, a), description=f"G({a}) without k=0")


def coth_relative_error(
    a: float, n: int, rule_provider: RuleProvider = build_rule
) -> float:
    """Relative error of 1/a^2 plus the n-point rule against (pi/a) coth(pi a)."""
    exact = coth_closed_form(a)
    value = 1.0 / (a * a) + gauss_sum(rule_provider(n), coth_summand(a))
    return abs(value - exact) / exact


def coth_error_curve(
    a: float,
    n_values: Sequence[int],
    rule_provider: RuleProvider = build_rule,
    max_workers: int = 1,
) -> List[Tuple[int, float, float, bool]]:
    """Rows (n, relative error, asymptotic estimate, inside estimator regime)."""
    errors = _map_ordered(
        partial(coth_relative_error, a, rule_provider=rule_provider),
        list(n_values),
        max_workers,
    )
    rows = []
    for n, error in zip(n_values, errors):
        estimate = apriori_error_coth(n, a, warn=False)
        rows.append((n, error, estimate, coth_regime(n, a)))
    logger.info(f"Finished coth benchmark a={a} over {len(rows)} rule sizes")
    return rows


def error_law_slope(
    rows: Sequence[Tuple[int, float, float, bool]],
    low: float = 1e-12,
    high: float = 1e-2,
) -> float:
    """Least-squares slope of ln(error) against n^2 over errors in (low, high).

    Raises:
        ArgumentError: fewer than three points in the window
    """
    window = [(n, error) for n, error, _, _ in rows if low < error < high]
    if len(window) < 3:
        raise ArgumentError(f"need three errors in ({low}, {high}), got {len(window)}")
    n_squared = np.array([float(n * n) for n, _ in window])
    log_error = np.log(np.array([error for _, error in window]))
    slope, _ = np.polyfit(n_squared, log_error, 1)
    return float(slope)


def geometric_grid(n_min: int, n_max: int) -> List[int]:
    """n_min, 2 n_min, 4 n_min, ... up to n_max."""
    if n_min < 1 or n_max < n_min:
        raise ArgumentError(f"invalid grid bounds {n_min}..{n_max}")
    grid = []
    n = n_min
    while n <= n_max:
        grid.append(n)
        n *= 2
    return grid


def richardson_curves(
    a: float,
    orders: Sequence[int],
    n_values: Sequence[int],
    rule_provider: RuleProvider = build_rule,
) -> List[Tuple[int, float, List[float], Optional[float]]]:
    """Rows (n, partial-sum error, Richardson errors per order, rule error).

    The rule error uses n nodes and is None for n above the rule size cap.
    """
    if not orders:
        raise ArgumentError("at least one Richardson order is required")
    exact = coth_closed_form(a)
    seq = partial_sums_G(a, richardson_indices(n_values, max(orders)))
    rows = []
    for n in n_values:
        plain = seq.at(n)
        assert plain is not None
        extrapolated = [abs(richardson(seq, N, n) - exact) / exact for N in orders]
        gauss = None
        if n <= MAX_RULE_SIZE:
            gauss = coth_relative_error(a, n, rule_provider)
        rows.append((n, abs(plain - exact) / exact, extrapolated, gauss))
    logger.info(f"Finished Richardson benchmark a={a} over {len(rows)} start indices")
    return rows


def gautschi_comparison(
    n_max: int = 64, rule_provider: RuleProvider = build_rule
) -> Dict[str, object]:
    """Smallest rule reaching 2.22e-7 relative error for H(40).

    Raises:
        ArgumentError: no rule up to n_max reaches the target
    """
    for n in range(1, n_max + 1):
        error = hl_relative_error(GAUTSCHI_X, n, rule_provider)
        if error <= GAUTSCHI_TARGET:
            return {
                "x": GAUTSCHI_X,
                "target": GAUTSCHI_TARGET,
                "gauss_nodes": n,
                "gauss_evaluations": n,
                "relative_error": error,
                "laplace_nodes": LAPLACE_NODES,
                "laplace_evaluations": LAPLACE_EVALUATIONS,
            }
    raise ArgumentError(f"no rule with n <= {n_max} reaches {GAUTSCHI_TARGET}")
