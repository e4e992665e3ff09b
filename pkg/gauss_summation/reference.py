"""Independent oracles and competing methods for the benchmark sums.

G(a) = sum over all integers k of 1/(a^2 + k^2) and the Hardy-Littlewood
function H(x) = sum over k >= 1 of sin(x/k)/k.
"""

import logging
import math
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from gauss_summation.exceptions import ArgumentError, DomainError
from gauss_summation.models import PartialSumSequence

logger = logging.getLogger(__name__)

HL_MAX_X = 200.0
HL_MIN_TOL = 1e-13
HL_MIN_TERMS = 10**6
_CHUNK = 10**6
_COTH_SATURATION = 20.0


class CompensatedSum:
    """Running sum with Neumaier's compensation.

    Keeps a correction term for the low-order bits lost in each addition, so
    long ordered accumulations stay accurate to a few ulps.
    """

    def __init__(self, initial: float = 0.0):
        self.sum = initial
        self.carry = 0.0

    def add(self, value: float) -> None:
        total = self.sum + value
        if abs(self.sum) >= abs(value):
            self.carry += (self.sum - total) + value
        else:
            self.carry += (value - total) + self.sum
        self.sum = total

    def extend(self, values: Iterable[float]) -> None:
        for value in values:
            self.add(value)

    @property
    def value(self) -> float:
        return self.sum + self.carry


def coth_closed_form(a: float) -> float:
    """Closed form G(a) = (pi/a) coth(pi a)."""
    if not a > 0.0:
        raise DomainError(f"coth_closed_form needs a > 0, got {a}")
    t = math.pi * a
    if t > _COTH_SATURATION:
        coth = 1.0 + 2.0 * math.exp(-2.0 * t)
    else:
        coth = 1.0 / math.tanh(t)
    return math.pi / a * coth


def _power_tail(p: int, K: int) -> float:
    """Sum of k^(-p) over k > K by Euler-Maclaurin."""
    return (
        K ** (1 - p) / (p - 1)
        - 0.5 * K ** (-p)
        + p * K ** (-p - 1) / 12.0
        - p * (p + 1) * (p + 2) * K ** (-p - 3) / 720.0
    )


@lru_cache(maxsize=64)
def hl_oracle(x: float, tol: float = HL_MIN_TOL) -> float:
    """Hardy-Littlewood function H(x) by direct summation plus analytic tail.

    Sums K = max(10^6, ceil(1000 x)) terms exactly rounded, then adds the tail
    x T_2 - x^3/6 T_4 + x^5/120 T_6 with T_p the power sums beyond K.

    Raises:
        DomainError: x outside (0, 200]
        ArgumentError: tol below 1e-13, or a tail bound above tol/10
    """
    if not 0.0 < x <= HL_MAX_X:
        raise DomainError(f"hl_oracle needs 0 < x <= {HL_MAX_X}, got {x}")
    if not tol >= HL_MIN_TOL:
        raise ArgumentError(f"hl_oracle needs tol >= {HL_MIN_TOL}, got {tol}")
    K = max(HL_MIN_TERMS, math.ceil(1000.0 * x))
    truncation = x**7 / (5040.0 * 6.0 * float(K) ** 6)
    if truncation > tol / 10.0:
        raise ArgumentError(f"tail truncation {truncation:.3e} exceeds tol/10")

    k = np.arange(1, K + 1, dtype=np.float64)
    direct = math.fsum(np.sin(x / k) / k)
    tail = math.fsum(
        [
            x * _power_tail(2, K),
            -(x**3) / 6.0 * _power_tail(4, K),
            x**5 / 120.0 * _power_tail(6, K),
        ]
    )
    logger.debug(f"hl_oracle: x={x}, K={K}, tail={tail:.3e}")
    return direct + tail


def _segment_sum(a: float, start: int, stop: int) -> float:
    """Exactly rounded sum of 2/(a^2 + k^2) for start <= k < stop."""
    a2 = a * a
    pieces = []
    for lo in range(start, stop, _CHUNK):
        k = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.float64)
        pieces.append(math.fsum(2.0 / (a2 + k * k)))
    return math.fsum(pieces)


def partial_sums_G(a: float, n_list: Sequence[int]) -> PartialSumSequence:
    """Partial sums G_n(a) = 1/a^2 + 2 sum_{k=1}^n 1/(a^2 + k^2).

    Terms are accumulated in ascending k; each stretch between requested n
    is summed exactly rounded and carried in a compensated running sum.

    Raises:
        DomainError: a <= 0
        ArgumentError: n_list not ascending or containing negatives
    """
    if not a > 0.0:
        raise DomainError(f"partial_sums_G needs a > 0, got {a}")
    ns = list(n_list)
    if any(n < 0 for n in ns) or any(m < n for n, m in zip(ns, ns[1:])):
        raise ArgumentError("n_list must be ascending nonnegative integers")

    acc = CompensatedSum(1.0 / (a * a))
    values: List[float] = []
    done = 0
    for n in ns:
        if n > done:
            acc.add(_segment_sum(a, done + 1, n + 1))
            done = n
        values.append(acc.value)
    return PartialSumSequence(
        parameter=a, n_values=tuple(ns), values=tuple(values), count=len(values)
    )


def richardson(seq: PartialSumSequence, N: int, n: int) -> float:
    """N-th Richardson extrapolation from A_n .. A_{n+N}.

    sum_{k=0}^N (-1)^(k+N) (n+k)^N / (k! (N-k)!) A_{n+k}, which is exact for
    sequences L + c_1/m + ... + c_N/m^N.

    Raises:
        ArgumentError: N < 1, n < 1, or a required term missing from seq
    """
    if N < 1 or n < 1:
        raise ArgumentError(f"richardson needs N >= 1 and n >= 1, got N={N}, n={n}")
    terms = []
    for k in range(N + 1):
        value = seq.at(n + k)
        if value is None:
            raise ArgumentError(f"sequence lacks the term with index {n + k}")
        weight = (n + k) ** N / (math.factorial(k) * math.factorial(N - k))
        terms.append((-1) ** (k + N) * weight * value)
    return math.fsum(terms)


def richardson_table(
    seq: PartialSumSequence, N: int, n_list: Sequence[int], reference: float
) -> List[Tuple[int, float, float]]:
    """(n, R_N(n), relative error against reference) for each n."""
    rows = []
    for n in n_list:
        value = richardson(seq, N, n)
        rows.append((n, value, abs(value - reference) / abs(reference)))
    return rows


def richardson_indices(n_list: Sequence[int], N: int) -> List[int]:
    """All indices n..n+N needed to extrapolate from each n in n_list."""
    return sorted({n + k for n in n_list for k in range(N + 1)})


def partial_sum_expansion(a: float, n: int, order: int = 5) -> float:
    """Large-n expansion of G_n(a) - G(a) through the 1/n^order term.

    -2/n + 1/n^2 + (2a^2 - 1)/(3n^3) - a^2/n^4 - (6a^4 - 10a^2 - 1)/(15n^5)
    """
    if not 0 <= order <= 5:
        raise ArgumentError(f"order must be in 0..5, got {order}")
    if n < 1:
        raise ArgumentError(f"n must be positive, got {n}")
    a2 = a * a
    coefficients = [
        -2.0,
        1.0,
        (2.0 * a2 - 1.0) / 3.0,
        -a2,
        -(6.0 * a2 * a2 - 10.0 * a2 - 1.0) / 15.0,
    ]
    terms = [c / float(n) ** (j + 1) for j, c in enumerate(coefficients[:order])]
    return math.fsum(terms)


def next_term_scale(a: float, n: int) -> float:
    """Magnitude a^4/n^6 of the first term left out of partial_sum_expansion."""
    return a**4 / float(n) ** 6
