"""Recurrence coefficients, moments and Gaussian summation rules.

The discrete measure puts mass 1/nu^2 at the points 1/nu^2, nu in Z without
zero. Its monic orthogonal polynomials obey s_{k+1} = (z - a_k) s_k - b_k s_{k-1}
with closed-form coefficients, so the n-point rule follows from the Jacobi
matrix by the Golub-Welsch procedure.
"""

import logging
import math
import sys
import threading
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from gauss_summation.exceptions import ArgumentError, DomainError, NumericalFailure
from gauss_summation.models import JacobiMatrix, RecurrenceCoefficients, SummationRule

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon
MAX_RULE_SIZE = 256
MAX_ZETA_INDEX = 128
MAX_QL_ITERATIONS = 50

# pi to 64 digits; zeta_even raises it to powers up to 256 exactly
_PI = Fraction("3.1415926535897932384626433832795028841971693993751058209749445923")

_bernoulli: List[Fraction] = [Fraction(1), Fraction(-1, 2)]
_bernoulli_lock = threading.Lock()


def _bernoulli_number(index: int) -> Fraction:
    """Exact Bernoulli number B_index (B_1 = -1/2 convention)."""
    with _bernoulli_lock:
        while len(_bernoulli) <= index:
            m = len(_bernoulli)
            if m % 2 == 1:
                _bernoulli.append(Fraction(0))
                continue
            terms = (
                math.comb(m + 1, k) * _bernoulli[k]
                for k in range(m)
                if _bernoulli[k]
            )
            total = sum(terms, Fraction(0))
            _bernoulli.append(-total / (m + 1))
        return _bernoulli[index]


@lru_cache(maxsize=None)
def zeta_even(m: int) -> float:
    """Riemann zeta at an even argument, zeta(2m), for 1 <= m <= 128.

    Uses zeta(2m) = (-1)^(m+1) B_2m (2 pi)^2m / (2 (2m)!) in exact rational
    arithmetic, so the result is correctly rounded.

    Raises:
        DomainError: m outside 1..128
    """
    if not isinstance(m, int) or not 1 <= m <= MAX_ZETA_INDEX:
        raise DomainError(f"zeta_even needs 1 <= m <= {MAX_ZETA_INDEX}, got {m}")
    b = _bernoulli_number(2 * m)
    value = (-1) ** (m + 1) * b * (2 * _PI) ** (2 * m) / (2 * math.factorial(2 * m))
    return float(value)


def moment(m: int) -> float:
    """Moment mu_m = sum over nu != 0 of nu^(-2(m+1)) = 2 zeta(2m + 2)."""
    if not isinstance(m, int) or m < 0:
        raise DomainError(f"moment index must be a nonnegative integer, got {m}")
    return 2.0 * zeta_even(m + 1)


@lru_cache(maxsize=None)
def recurrence_coeffs(n: int) -> RecurrenceCoefficients:
    """First n recursion coefficients a_k, b_k.

    a_0 = pi^2/15, a_k = 2 pi^2/((4k+1)(4k+5)) and
    b_k = pi^4/((4k-1)(4k+1)^2(4k+3)) for k >= 1; b_0 is the zeroth moment.
    """
    if n < 1:
        raise ArgumentError(f"recurrence_coeffs needs n >= 1, got {n}")
    pi2 = math.pi**2
    pi4 = pi2 * pi2
    a = [pi2 / 15.0]
    b = [moment(0)]
    for k in range(1, n):
        a.append(2.0 * pi2 / ((4 * k + 1) * (4 * k + 5)))
        b.append(pi4 / ((4 * k - 1) * (4 * k + 1) ** 2 * (4 * k + 3)))
    return RecurrenceCoefficients(a=tuple(a), b=tuple(b))


def jacobi_matrix(coeffs: RecurrenceCoefficients, n: int) -> JacobiMatrix:
    """n x n Jacobi matrix with diagonal a_k and off-diagonal sqrt(b_k)."""
    if n < 1 or coeffs.size < n:
        raise ArgumentError(
            f"Jacobi matrix of order {n} needs {n} coefficients, got {coeffs.size}"
        )
    return JacobiMatrix(
        diag=coeffs.a[:n],
        offdiag=tuple(math.sqrt(v) for v in coeffs.b[1:n]),
    )


def eig_tridiag(
    J: JacobiMatrix, tol: float = EPS
) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Eigenvalues and first eigenvector components of a Jacobi matrix.

    Implicit QL with Wilkinson-type shifts, tracking only the row of the
    eigenvector matrix that is needed. Matrices graded with their large
    entries top-left are reversed first so the QL sweep works from the small
    end; the tracked row is then the last one of the reversed problem.

    Args:
        J: symmetric tridiagonal matrix
        tol: relative deflation threshold, at least machine epsilon

    Returns:
        Ascending eigenvalues and the matching first components.

    Raises:
        ArgumentError: tol below machine epsilon
        NumericalFailure: an eigenvalue did not converge in 50 sweeps
    """
    if not tol >= EPS:
        raise ArgumentError(f"tol must be at least machine epsilon, got {tol}")
    n = J.order
    d = list(J.diag)
    e = list(J.offdiag) + [0.0]
    z = [0.0] * n

    reverse = abs(d[0]) > abs(d[-1])
    if reverse:
        d.reverse()
        e = list(reversed(J.offdiag)) + [0.0]
        z[-1] = 1.0
    else:
        z[0] = 1.0

    sweeps = 0
    for top in range(n):
        iterations = 0
        while True:
            m = top
            while m < n - 1:
                if abs(e[m]) <= tol * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == top:
                break
            if iterations == MAX_QL_ITERATIONS:
                raise NumericalFailure(
                    f"QL iteration did not converge for eigenvalue {top}", index=top
                )
            iterations += 1

            g = (d[top + 1] - d[top]) / (2.0 * e[top])
            r = math.hypot(g, 1.0)
            g = d[m] - d[top] + e[top] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, top - 1, -1):
                f = s * e[i]
                b = c * e[i]
                if abs(f) < abs(g):
                    c = g / f
                    r = math.hypot(c, 1.0)
                    e[i + 1] = f * r
                    s = 1.0 / r
                    c *= s
                else:
                    s = f / g
                    r = math.hypot(s, 1.0)
                    e[i + 1] = g * r
                    c = 1.0 / r
                    s *= c
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b

                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f

            d[top] -= p
            e[top] = g
            e[m] = 0.0
        sweeps += iterations

    logger.debug(f"eig_tridiag: order {n}, {sweeps} QL sweeps, reversed={reverse}")
    order = sorted(range(n), key=lambda i: d[i])
    return tuple(d[i] for i in order), tuple(z[i] for i in order)


@lru_cache(maxsize=None)
def build_rule(n: int) -> SummationRule:
    """n-point Gaussian summation rule by the Golub-Welsch procedure.

    Weights are mu_0 times the squared first eigenvector components,
    normalised so they add up to mu_0.

    Raises:
        DomainError: n outside 1..256
        NumericalFailure: eigensolver failure
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_RULE_SIZE:
        raise DomainError(f"rule size must be in 1..{MAX_RULE_SIZE}, got {n}")
    coeffs = recurrence_coeffs(n)
    nodes, first = eig_tridiag(jacobi_matrix(coeffs, n))
    mu0 = coeffs.b[0]
    squares = [q * q for q in first]
    norm = math.fsum(squares)
    weights = tuple(mu0 * q2 / norm for q2 in squares)
    logger.info(f"Built {n}-point summation rule")
    return SummationRule(n=n, nodes=nodes, weights=weights)
