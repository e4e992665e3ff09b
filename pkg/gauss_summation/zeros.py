"""Zeros of the odd-index Pade denominators and their distribution.

A rule node z corresponds to the zero x = pi/sqrt(z) of S_{2n-1}. Small zeros
sit at multiples of pi; beyond tau = x/nu = 1 the spacing grows and the
counting function bends with a cusp at sigma = 1/pi.
"""

import logging
import math
from typing import List

from gauss_summation.exceptions import ArgumentError, DomainError
from gauss_summation.models import DensityPoint, SummationRule, ZeroSet

logger = logging.getLogger(__name__)

TAIL_LAW_MIN_N = 16


def zero_set(rule: SummationRule) -> ZeroSet:
    """Positive zeros x_j = pi/sqrt(z) in ascending order, with tau and sigma.

    Raises:
        DomainError: a node is not positive
    """
    if any(z <= 0.0 for z in rule.nodes):
        raise DomainError("zero_set needs strictly positive nodes")
    nu = 2 * rule.n + 2.5
    x = tuple(math.pi / math.sqrt(z) for z in reversed(rule.nodes))
    return ZeroSet(
        n=rule.n,
        nu=nu,
        x=x,
        tau=tuple(v / nu for v in x),
        sigma=tuple(j / nu for j in range(1, rule.n + 1)),
    )


def asymptotic_sigma(tau: float) -> float:
    """Limiting zero-counting function sigma(tau).

    pi sigma = tau for tau <= 1 and tau - sqrt(tau^2 - 1) + arccos(1/tau) beyond.
    """
    if not tau > 0.0:
        raise DomainError(f"asymptotic_sigma needs tau > 0, got {tau}")
    if tau <= 1.0:
        return tau / math.pi
    root = math.sqrt((tau - 1.0) * (tau + 1.0))
    return (1.0 / (tau + root) + math.acos(1.0 / tau)) / math.pi


def density_data(zset: ZeroSet) -> List[DensityPoint]:
    """Zero density 1/(x_{j+1} - x_j) against sigma_j = j/nu.

    Both sigma conventions are reported: j/nu and the full-range 2j/nu.
    """
    if len(zset.x) < 2:
        raise ArgumentError("density_data needs at least two zeros")
    points = []
    for j in range(1, len(zset.x)):
        tau = zset.tau[j - 1]
        points.append(
            DensityPoint(
                j=j,
                sigma=j / zset.nu,
                sigma_full=2.0 * j / zset.nu,
                tau=tau,
                density=1.0 / (zset.x[j] - zset.x[j - 1]),
                sigma_asymptotic=asymptotic_sigma(tau),
            )
        )
    return points


def tail_law_prediction(n: int, j: int) -> float:
    """Large-zero law x_j ~ mu^2/(pi (mu - 2j - 1/2)) with mu = 2n + 3/2."""
    mu = 2 * n + 1.5
    return mu * mu / (math.pi * (mu - 2 * j - 0.5))


def tail_law_check(zset: ZeroSet) -> float:
    """Max relative deviation of the largest tenth of the zeros from the tail law.

    Raises:
        ArgumentError: fewer than 16 zeros
    """
    n = zset.n
    if n < TAIL_LAW_MIN_N:
        raise ArgumentError(f"tail_law_check needs n >= {TAIL_LAW_MIN_N}, got {n}")
    count = math.ceil(n / 10)
    deviation = 0.0
    for j in range(n - count + 1, n + 1):
        predicted = tail_law_prediction(n, j)
        deviation = max(deviation, abs(zset.x[j - 1] / predicted - 1.0))
    logger.debug(f"tail_law_check: n={n}, top {count} zeros, deviation={deviation}")
    return deviation


def bulk_zero_count(zset: ZeroSet) -> int:
    """Number of zeros in the uniform regime tau <= 1 (about nu/pi of them)."""
    return sum(1 for t in zset.tau if t <= 1.0)


def regime_split_deviation(zset: ZeroSet, tau_max: float = 0.9) -> float:
    """Largest distance, in units of pi, of a zero with tau <= tau_max from k pi."""
    deviation = 0.0
    for x, tau in zip(zset.x, zset.tau):
        if tau <= tau_max:
            deviation = max(deviation, abs(x / math.pi - round(x / math.pi)))
    return deviation
