"""Continued fraction, Pade denominators and the Weyl function of the measure.

In the variable x = pi/sqrt(z) the Weyl function is 1 - x cot x. Its continued
fraction has numerators R_n and denominators S_n; the odd-index denominators
are the orthogonal polynomials, s_n(z) = z^n S_{2n-1}(pi/sqrt(z)).
"""

import logging
import math
from functools import lru_cache
from typing import List, Tuple

from gauss_summation.exceptions import ArgumentError, DomainError, PoleError
from gauss_summation.models import ContinuedFractionCoeffs, PolyEvalPoint
from gauss_summation.rule_core import build_rule, moment, recurrence_coeffs

logger = logging.getLogger(__name__)

POLE_DISTANCE = 1e-9
PADE_POLE_TOL = 1e-13
ROOT_TOL = 1e-13
MAX_CLOSED_FORM_INDEX = 21
MAX_CLOSED_FORM_X = 50.0
_SERIES_THRESHOLD = 1e4
_SERIES_TERMS = 8

Poly = Tuple[int, ...]


def cf_coeffs(n: int) -> ContinuedFractionCoeffs:
    """Coefficients c_0 = 1/3, c_k = -1/((2k+1)(2k+3)) for k = 1..n."""
    if n < 0:
        raise ArgumentError(f"cf_coeffs needs n >= 0, got {n}")
    c = [1.0 / 3.0]
    c.extend(-1.0 / ((2 * k + 1) * (2 * k + 3)) for k in range(1, n + 1))
    return ContinuedFractionCoeffs(c=tuple(c))


def eval_RS(n: int, x: float) -> Tuple[float, float]:
    """Numerator R_n(x) and denominator S_n(x) of the n-th convergent.

    Forward recursion P_{k+1} = P_k + c_{k+1} x^2 P_{k-1} for both, started
    from R_{-1} = 0, R_0 = c_0 x^2, S_{-1} = S_0 = 1.
    """
    if n < 0:
        raise ArgumentError(f"eval_RS needs n >= 0, got {n}")
    c = cf_coeffs(n).c
    x2 = x * x
    r_prev, r = 0.0, c[0] * x2
    s_prev, s = 1.0, 1.0
    for k in range(n):
        r_prev, r = r, r + c[k + 1] * x2 * r_prev
        s_prev, s = s, s + c[k + 1] * x2 * s_prev
    return r, s


def eval_s(n: int, z: float) -> float:
    """Monic orthogonal polynomial s_n(z) by its three-term recursion."""
    if n < 0:
        raise ArgumentError(f"eval_s needs n >= 0, got {n}")
    if n == 0:
        return 1.0
    coeffs = recurrence_coeffs(n)
    s_prev, s = 0.0, 1.0
    for k in range(n):
        s_prev, s = s, (z - coeffs.a[k]) * s - coeffs.b[k] * s_prev
    return s


def _check_pole(z: float) -> None:
    nu = round(1.0 / math.sqrt(z))
    for candidate in (nu - 1, nu, nu + 1):
        if candidate >= 1 and abs(z - 1.0 / candidate**2) <= POLE_DISTANCE:
            raise PoleError(
                f"z={z} is within {POLE_DISTANCE} of the pole 1/{candidate}^2",
                value=z,
            )


def weyl_series(z: float, terms: int = _SERIES_TERMS) -> float:
    """Moment expansion of the Weyl function, sum of mu_k z^(-k-1), for z > 1."""
    if not z > 1.0:
        raise DomainError(f"weyl_series converges only for z > 1, got {z}")
    if not 1 <= terms <= 128:
        raise ArgumentError(f"terms must be in 1..128, got {terms}")
    return math.fsum(moment(k) * z ** (-k - 1) for k in range(terms))


def weyl(z: float) -> float:
    """Weyl function 1 - (pi/sqrt z) cot(pi/sqrt z) of the measure.

    Raises:
        DomainError: z <= 0
        PoleError: z within 1e-9 of a support point 1/nu^2
    """
    if not z > 0.0:
        raise DomainError(f"weyl needs z > 0, got {z}")
    _check_pole(z)
    if z >= _SERIES_THRESHOLD:
        return weyl_series(z)
    x = PolyEvalPoint.from_z(z).x
    return 1.0 - x / math.tan(x)


def pade_convergent(n: int, z: float) -> float:
    """Pade approximant R_{2n-1}/S_{2n-1} of the Weyl function at x = pi/sqrt(z).

    Raises:
        DomainError: z <= 0
        PoleError: z is a zero of S_{2n-1}
    """
    if not z > 0.0:
        raise DomainError(f"pade_convergent needs z > 0, got {z}")
    if n == 0:
        return 0.0
    x = PolyEvalPoint.from_z(z).x
    r, s = eval_RS(2 * n - 1, x)
    if abs(s) <= PADE_POLE_TOL:
        raise PoleError(f"S_{2 * n - 1} vanishes at x={x}", value=z)
    return r / s


@lru_cache(maxsize=None)
def _spherical_coefficients(order: int) -> Tuple[Poly, Poly, Poly, Poly]:
    """Integer coefficients of j_order and y_order in powers of u = 1/x.

    j_order(x) = P_j(u) sin x + Q_j(u) cos x, likewise for y_order.
    """

    def step(m: int, cur: List[int], prev: List[int]) -> List[int]:
        # f_{m+1} = (2m+1) u f_m - f_{m-1}
        out = [0] * (max(len(cur) + 1, len(prev)))
        for i, v in enumerate(cur):
            out[i + 1] += (2 * m + 1) * v
        for i, v in enumerate(prev):
            out[i] -= v
        return out

    # seeds at orders -1 and 0
    jp_prev, jq_prev, jp, jq = [0], [0, 1], [0, 1], [0]
    yp_prev, yq_prev, yp, yq = [0, 1], [0], [0], [0, -1]
    for m in range(order):
        jp_prev, jp = jp, step(m, jp, jp_prev)
        jq_prev, jq = jq, step(m, jq, jq_prev)
        yp_prev, yp = yp, step(m, yp, yp_prev)
        yq_prev, yq = yq, step(m, yq, yq_prev)
    return tuple(jp), tuple(jq), tuple(yp), tuple(yq)


def _horner(coeffs: Poly, u: float) -> float:
    result = 0.0
    for c in reversed(coeffs):
        result = result * u + c
    return result


def spherical_jy(order: int, x: float) -> Tuple[float, float]:
    """Spherical Bessel functions j_order(x), y_order(x) in trigonometric form."""
    if order < 0:
        raise ArgumentError(f"order must be nonnegative, got {order}")
    if not x > 0.0:
        raise DomainError(f"spherical_jy needs x > 0, got {x}")
    jp, jq, yp, yq = _spherical_coefficients(order)
    u = 1.0 / x
    sin_x, cos_x = math.sin(x), math.cos(x)
    j = _horner(jp, u) * sin_x + _horner(jq, u) * cos_x
    y = _horner(yp, u) * sin_x + _horner(yq, u) * cos_x
    return j, y


def bessel_half_integer(order: int, x: float) -> Tuple[float, float]:
    """J and Y of order `order` + 1/2, via J_{m+1/2}(x) = sqrt(2x/pi) j_m(x)."""
    j, y = spherical_jy(order, x)
    scale = math.sqrt(2.0 * x / math.pi)
    return scale * j, scale * y


def S_closed_form(n: int, x: float) -> float:
    """Closed form of S_n for odd n through half-integer Bessel functions.

    S_n(x) = -pi x^(n+3/2) / (Gamma(n+5/2) 2^(n+5/2))
             * [cos x J_{n+5/2}(x) + sin x Y_{n+5/2}(x)],
    evaluated as -x^m/(2m-1)!! [cos x j_m(x) + sin x y_m(x)] with m = n + 2.

    Raises:
        DomainError: n not odd in 1..21 or x outside (0, 50]
    """
    if n < 1 or n > MAX_CLOSED_FORM_INDEX or n % 2 == 0:
        raise DomainError(
            f"S_closed_form needs odd 1 <= n <= {MAX_CLOSED_FORM_INDEX}, got {n}"
        )
    if not 0.0 < x <= MAX_CLOSED_FORM_X:
        raise DomainError(
            f"S_closed_form needs 0 < x <= {MAX_CLOSED_FORM_X}, got {x}"
        )
    m = n + 2
    j, y = spherical_jy(m, x)
    double_factorial = math.prod(range(2 * m - 1, 0, -2))
    return -(x**m) / double_factorial * (math.cos(x) * j + math.sin(x) * y)


def s_roots(n: int, tol: float = ROOT_TOL) -> Tuple[float, ...]:
    """Roots of s_n by bisection inside the interlacing brackets of s_{n-1}.

    The brackets are 0, the nodes of the (n-1)-point rule, and 1.
    """
    if n < 1:
        raise ArgumentError(f"s_roots needs n >= 1, got {n}")
    inner = build_rule(n - 1).nodes if n > 1 else ()
    edges = (0.0,) + tuple(inner) + (1.0,)
    roots = []
    for lo, hi in zip(edges, edges[1:]):
        f_lo = eval_s(n, lo)
        for _ in range(200):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            f_mid = eval_s(n, mid)
            if (f_mid < 0.0) == (f_lo < 0.0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return tuple(roots)
