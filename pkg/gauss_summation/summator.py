"""Apply summation rules to user summands, adaptively, with error estimates."""

import logging
import math
import sys
from typing import Callable, List, Optional, Tuple

from gauss_summation.exceptions import (
    ArgumentError,
    DomainError,
    EvaluationError,
    RangeError,
)
from gauss_summation.models import (
    ConvergenceReport,
    ConvergenceStatus,
    Side,
    Summand,
    SummationRule,
)
from gauss_summation.rule_core import (
    EPS,
    MAX_RULE_SIZE,
    build_rule,
    moment,
    recurrence_coeffs,
)

logger = logging.getLogger(__name__)

RuleProvider = Callable[[int], SummationRule]

MAX_KN_INDEX = 40
STAGNATION_FACTOR = 10.0
STAGNATION_RUN = 3
N_START = 2


def _term(s: Summand, k: float) -> float:
    try:
        value = float(s.g(k))
    except (ArithmeticError, ValueError) as e:
        raise EvaluationError(f"summand failed at k={k}: {e}", k=k) from e
    if not math.isfinite(value):
        raise EvaluationError(f"summand is not finite at k={k}", k=k)
    return value


def gauss_sum(rule: SummationRule, s: Summand) -> float:
    """Gaussian summation of g over the nonzero integers.

    With t = 1/nu^2 the term g(nu) equals (1/nu^2) f(t) for f(t) = g(1/sqrt t)/t,
    so the rule value is sum of w_k g(1/sqrt z_k)/z_k. Positive-half sums take
    half of the two-sided value and rely on g being even.

    Raises:
        EvaluationError: g is not finite at a pseudo-index
    """
    terms = [
        w * _term(s, 1.0 / math.sqrt(z)) / z for z, w in zip(rule.nodes, rule.weights)
    ]
    total = math.fsum(terms)
    if s.side == Side.POSITIVE_HALF:
        total *= 0.5
    return total


def adaptive_sum(
    s: Summand,
    tol: float,
    n_max: int,
    rule_provider: Optional[RuleProvider] = None,
) -> ConvergenceReport:
    """Evaluate rules of size 2, 3, ... until the values settle.

    Convergence: two consecutive deltas |v_{n+1} - v_n| <= tol |v_n|, reported
    at the first n of the pair. The reported value is exactly the n_used-point
    rule, so gauss_sum(build_rule(n_used), s) reproduces it and a caller can
    keep that one rule; the two later values are in the report as well.
    Stagnation: three consecutive deltas below ten
    machine epsilons of the value, checked first; when tol itself is below
    that floor only stagnation or n_max can end the run.

    Args:
        s: summand
        tol: relative tolerance, > 0
        n_max: largest rule size, 2..256
        rule_provider: maps n to a rule, defaults to build_rule

    Raises:
        ArgumentError: invalid tol or n_max
        EvaluationError: from gauss_sum
    """
    if not (tol > 0.0 and math.isfinite(tol)):
        raise ArgumentError(f"tol must be positive, got {tol}")
    if not N_START <= n_max <= MAX_RULE_SIZE:
        raise ArgumentError(
            f"n_max must be in {N_START}..{MAX_RULE_SIZE}, got {n_max}"
        )
    provider = rule_provider or build_rule
    floor = STAGNATION_FACTOR * EPS
    check_convergence = tol >= floor

    values: List[float] = [gauss_sum(provider(N_START), s)]
    deltas: List[float] = []
    status = ConvergenceStatus.HIT_N_MAX
    n_used = n_max
    n = N_START
    while n < n_max:
        values.append(gauss_sum(provider(n + 1), s))
        deltas.append(values[-1] - values[-2])
        n += 1
        logger.debug(f"adaptive_sum: n={n} value={values[-1]!r} delta={deltas[-1]:.3e}")

        if len(deltas) >= STAGNATION_RUN and all(
            abs(deltas[-i]) <= floor * abs(values[-i - 1])
            for i in range(1, STAGNATION_RUN + 1)
        ):
            status = ConvergenceStatus.STAGNATED
            n_used = n - STAGNATION_RUN
            break
        if check_convergence and len(deltas) >= 2:
            previous_ok = abs(deltas[-2]) <= tol * abs(values[-3])
            latest_ok = abs(deltas[-1]) <= tol * abs(values[-2])
            if previous_ok and latest_ok:
                status = ConvergenceStatus.CONVERGED
                n_used = n - 2
                break

    logger.info(f"adaptive_sum: {status.value} at n={n_used} after {len(values)} rules")
    return ConvergenceReport(
        n_start=N_START,
        values=tuple(values),
        deltas=tuple(deltas),
        n_used=n_used,
        status=status,
    )


def error_constant_Kn(n: int) -> Tuple[float, float]:
    """Error constant K_n in two normalisations.

    Returns:
        (closed_value, moment_norm) where closed_value is
        (4n+3) pi^(4n+3) 16^(-(n+1)) / (2 Gamma(2n+5/2)^2) and moment_norm is
        mu_0 times the product of b_1..b_n, the squared norm of monic s_n.
        Their ratio is 2 for every n.

    Raises:
        ArgumentError: n < 0
        RangeError: n > 40
    """
    if n < 0:
        raise ArgumentError(f"error_constant_Kn needs n >= 0, got {n}")
    if n > MAX_KN_INDEX:
        raise RangeError(f"K_n is not representable for n={n} > {MAX_KN_INDEX}")
    log_value = (
        (4 * n + 3) * math.log(math.pi)
        - 4 * (n + 1) * math.log(2.0)
        - 2.0 * math.lgamma(2 * n + 2.5)
    )
    closed_value = 0.5 * (4 * n + 3) * math.exp(log_value)
    coeffs = recurrence_coeffs(max(n, 1))
    moment_norm = moment(0) * math.prod(coeffs.b[1 : n + 1])
    return closed_value, moment_norm


def error_constant_ratio(n: int) -> float:
    """moment_norm / closed_value of error_constant_Kn."""
    closed_value, moment_norm = error_constant_Kn(n)
    return moment_norm / closed_value


def _nu(n: int) -> float:
    return 2 * n + 2.5


def coth_regime(n: int, a: float) -> bool:
    """True when nu^2 >> pi a and a >> nu hold (by a factor 2)."""
    nu = _nu(n)
    return nu * nu >= 2.0 * math.pi * a and a >= 2.0 * nu


def hl_regime(n: int, a: float) -> bool:
    """True when 2 nu^2/(pi a) >> 1 holds (by a factor 2)."""
    nu = _nu(n)
    return 2.0 * nu * nu / (math.pi * a) >= 2.0


def _check_estimator_args(name: str, n: int, a: float) -> None:
    if n < 1:
        raise ArgumentError(f"{name} needs n >= 1, got {n}")
    if not a > 0.0:
        raise DomainError(f"{name} needs a > 0, got {a}")


def apriori_error_coth(n: int, a: float, warn: bool = True) -> float:
    """Asymptotic error 8 nu exp(-nu^2/(pi a)), nu = 2n + 5/2, of the coth sum."""
    _check_estimator_args("apriori_error_coth", n, a)
    nu = _nu(n)
    if warn and not coth_regime(n, a):
        logger.warning(f"apriori_error_coth(n={n}, a={a}) is outside its regime")
    return 8.0 * nu * math.exp(-nu * nu / (math.pi * a))


def apriori_error_hl(n: int, a: float, warn: bool = True) -> float:
    """Asymptotic error of the Hardy-Littlewood sum H(a), in log space.

    2 sqrt(pi nu) exp(-pi a/nu) (e^2 pi a/(4 nu^2))^(2 nu), nu = 2n + 5/2.
    """
    _check_estimator_args("apriori_error_hl", n, a)
    nu = _nu(n)
    if warn and not hl_regime(n, a):
        logger.warning(f"apriori_error_hl(n={n}, a={a}) is outside its regime")
    log_value = (
        math.log(2.0)
        + 0.5 * math.log(math.pi * nu)
        - math.pi * a / nu
        + 2.0 * nu * (2.0 + math.log(math.pi * a) - math.log(4.0 * nu * nu))
    )
    if log_value > math.log(sys.float_info.max):
        return math.inf
    return math.exp(log_value)
