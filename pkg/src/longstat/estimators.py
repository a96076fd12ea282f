"""Distance-from-stationarity statistics built on the local periodogram.

The squared L2 distance between a time-varying spectral density
f(u, lam) and its time average is estimated by contrasting the sum of
squared local periodogram ordinates with the squared column means of
the same matrix:

    distance_sq = 2*pi*sum_sq_local - 4*pi*sum_sq_pooled

Under second-order stationarity the population distance is zero and
the centred, scaled statistic

    sqrt(T) * (distance_sq + bias) / sqrt(4*pi^2 * quartic_sum)

is asymptotically standard normal, which yields the one-sided test in
:func:`asymptotic_test`.  The additive ``bias`` term removes the
leading finite-window bias of ``distance_sq``; it is itself estimated
from the squared ordinates.  The normal approximation degrades when
the memory parameter of the data reaches 1/8 or more, in which case
the bootstrap test is the better tool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import BlockScheme, as_series, make_block_scheme, normal_quantile
from .errors import DegenerateInputError, InvalidArgumentError
from .spectral import PeriodogramMatrix, local_periodogram_matrix

__all__ = [
    "StatSummary",
    "TestResult",
    "asymptotic_test",
    "bias_correction",
    "distance_sq",
    "quartic_sum",
    "sum_sq_local",
    "sum_sq_pooled",
    "summarize",
]

TWO_PI = 2.0 * np.pi


def sum_sq_local(pg: PeriodogramMatrix) -> float:
    """Sum of squared local periodogram ordinates over blocks and
    frequencies, divided by the number of used observations.

    Estimates ``(1 / (2*pi)) * integral integral f(u, lam)^2 dlam du``.
    """
    return float((pg.values**2).sum() / pg.scheme.n_used)


def sum_sq_pooled(pg: PeriodogramMatrix) -> float:
    """Sum over frequencies of the squared block-averaged ordinates,
    divided by the window length.

    Estimates ``(1 / (4*pi)) * integral (integral f(u, lam) du)^2 dlam``,
    the energy of the time-pooled spectrum.
    """
    col_means = pg.values.mean(axis=0)
    return float((col_means**2).sum() / pg.scheme.n_window)


def distance_sq(pg: PeriodogramMatrix) -> float:
    """Estimated squared L2 distance from stationarity.

    ``2*pi*sum_sq_local(pg) - 4*pi*sum_sq_pooled(pg)``.  Can be
    negative in finite samples; the population value is non-negative
    and is zero exactly under second-order stationarity.
    """
    return TWO_PI * sum_sq_local(pg) - 2.0 * TWO_PI * sum_sq_pooled(pg)


def bias_correction(pg: PeriodogramMatrix) -> float:
    """Estimate of the leading finite-window bias of :func:`distance_sq`.

    ``(2*pi*n_window / n_used) * sum_sq_local(pg)``; added to the
    distance estimate before standardization.
    """
    s = pg.scheme
    return TWO_PI * s.n_window / s.n_used * sum_sq_local(pg)


def quartic_sum(pg: PeriodogramMatrix) -> float:
    """Sum of fourth powers of the ordinates divided by ``6 * n_used``.

    Estimates ``(1 / pi) * integral integral f(u, lam)^4 dlam du``, the
    building block of the null variance of the distance estimate.
    """
    return float((pg.values**4).sum() / (6.0 * pg.scheme.n_used))


@dataclass(frozen=True, eq=False)
class StatSummary:
    """All scalar statistics computed from one periodogram matrix.

    ``statistic`` is the standardized test statistic; it is NaN when
    ``quartic_sum`` is zero (a degenerate, e.g. constant, series).
    """

    sum_sq_local: float
    sum_sq_pooled: float
    distance_sq: float
    bias: float
    quartic_sum: float
    statistic: float
    scheme: BlockScheme


def summarize(pg: PeriodogramMatrix) -> StatSummary:
    """Compute every scalar statistic of interest from ``pg`` at once."""
    s1 = sum_sq_local(pg)
    s2 = sum_sq_pooled(pg)
    d2 = TWO_PI * s1 - 2.0 * TWO_PI * s2
    scheme = pg.scheme
    bias = TWO_PI * scheme.n_window / scheme.n_used * s1
    q = quartic_sum(pg)
    if q > 0.0:
        stat = math.sqrt(scheme.n_used) * (d2 + bias) / math.sqrt(4.0 * np.pi**2 * q)
    else:
        stat = float("nan")
    return StatSummary(
        sum_sq_local=s1,
        sum_sq_pooled=s2,
        distance_sq=d2,
        bias=bias,
        quartic_sum=q,
        statistic=stat,
        scheme=scheme,
    )


@dataclass(frozen=True, eq=False)
class TestResult:
    """Outcome of a stationarity test.

    ``statistic`` is the standardized statistic for the asymptotic test
    and the raw distance estimate for the bootstrap test; ``threshold``
    is the corresponding rejection threshold, and ``reject`` says
    whether the null of stationarity was rejected at level ``alpha``.
    """

    method: str
    statistic: float
    threshold: float
    alpha: float
    reject: bool
    summary: StatSummary
    diagnostics: dict = field(default_factory=dict)


def asymptotic_test(series, n_window: int, alpha: float = 0.05) -> TestResult:
    """One-sided test of second-order stationarity via the normal limit.

    Rejects when the standardized statistic reaches the upper
    ``1 - alpha`` normal quantile.

    Parameters
    ----------
    series : array_like
        Observations; at least two full windows are required.
    n_window : int
        Even window length (at least 4).
    alpha : float
        Test level in (0, 1).

    Raises
    ------
    InvalidArgumentError
        On invalid ``alpha`` or window layout.
    DegenerateInputError
        When the periodogram carries no variation (all ordinates zero),
        so the statistic is undefined.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie strictly in (0, 1), got {alpha}")
    x = as_series(series)
    scheme = make_block_scheme(x.size, n_window)
    if scheme.n_blocks < 2:
        raise InvalidArgumentError(
            f"need at least 2 full windows, got {scheme.n_blocks} "
            f"(series length {x.size}, window {n_window})"
        )
    pg = local_periodogram_matrix(x, scheme)
    s = summarize(pg)
    if not s.quartic_sum > 0.0:
        raise DegenerateInputError(
            "all periodogram ordinates are zero; the test statistic is undefined"
        )
    threshold = normal_quantile(1.0 - alpha)
    return TestResult(
        method="asymptotic",
        statistic=s.statistic,
        threshold=threshold,
        alpha=alpha,
        reject=bool(s.statistic >= threshold),
        summary=s,
        diagnostics={"n_discarded": scheme.n_discarded},
    )
