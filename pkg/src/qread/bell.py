"""A practical sub-optimal receiver: Bell homodyne plus a variance test.

Each returning signal/idler pair is combined on a balanced beam
splitter and the two quiet quadratures are homodyned, so every probe
copy yields two zero-mean Gaussian numbers whose variance depends on
the stored bit.  Reading a bit is then a one-tailed chi-squared test
between the two variances; this module evaluates that test's error
probability in closed form, validates it by Monte Carlo, and optimizes
the resulting information gain over bandwidth and significance level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaln

from .analysis import _classical_reference, binary_entropy
from .errors import ModelRegimeError, NumericalError
from .gaussian import CellSpec, conditional_output_cm

__all__ = [
    "ReceiverConfig",
    "TestStatistics",
    "MonteCarloResult",
    "GTestResult",
    "conditional_variance",
    "regularized_upper_gamma",
    "test_quantile",
    "p_test",
    "monte_carlo_error",
    "optimize_g_test",
]

# Series shape cap: far above any bandwidth the gain surfaces explore,
# but low enough that the one-pass log-domain sum stays cheap.
_MAX_SHAPE = 10 ** 5

# Monte Carlo trials are drawn in fixed-size blocks, each with its own
# counter-derived generator, so the estimate never depends on how the
# blocks are scheduled.
_BLOCK = 8192


@dataclass(frozen=True)
class ReceiverConfig:
    """Receiver knobs: probe copies ``m`` and significance level ``phi``."""

    m: int
    phi: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        if not 0.0 < self.phi < 1.0:
            raise ValueError("phi must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class TestStatistics:
    """Everything the variance test produced at one parameter point.

    ``v0``/``v1`` are the conditional variances of a single homodyne
    outcome, ``sigma`` the tested contrast (larger variance over the
    smaller, minus one), ``quantile`` the acceptance threshold on the
    summed squares, and the three probabilities the resulting errors:
    the null hypothesis is the *larger-variance* bit, so for r0 < r1
    it is bit 0 and ``sigma = (v0 - v1) / v1``.
    """

    v0: float
    v1: float
    sigma: float
    quantile: float
    p_h0_given_h1: float
    p_h1_given_h0: float
    p_test: float


@dataclass(frozen=True)
class MonteCarloResult:
    """Empirical error estimate with its binomial standard error."""

    estimate: float
    std_error: float
    trials: int


@dataclass(frozen=True)
class GTestResult:
    """Gain surface of the variance test and its maximizing point."""

    best_g: float
    best_m: int
    best_phi: float
    surface: np.ndarray
    m_values: tuple
    phi_values: np.ndarray


def conditional_variance(cell: CellSpec, u: int, n_s: float) -> float:
    """Variance of one Bell-homodyne outcome given stored bit ``u``.

    V(u) = [r_u(mu + eps) + (1 - r_u)beta + mu + 3eps
            - 2 sqrt(r_u(mu^2 - 1))] / 2,
    with mu = 2 n_s + 1 and beta = 2 nbar + 1; equals the vacuum value 1
    for a perfect mirror probed by vacuum.
    """
    if n_s < 0.0:
        raise ValueError("n_s must be nonnegative")
    r_u = cell.reflectivity(u)
    mu = 2.0 * n_s + 1.0
    beta = 2.0 * cell.nbar + 1.0
    return 0.5 * (r_u * (mu + cell.eps) + (1.0 - r_u) * beta + mu
                  + 3.0 * cell.eps - 2.0 * math.sqrt(r_u * (mu * mu - 1.0)))


@lru_cache(maxsize=64)
def _series_grid(m: int):
    """Cached (k, ln k!) arrays for the shape-m upper-gamma series."""
    k = np.arange(m, dtype=float)
    return k, gammaln(k + 1.0)


def regularized_upper_gamma(m: int, x: float) -> float:
    """Upper tail Gamma(m, x)/Gamma(m) of the shape-m Gamma law.

    For integer shape the ratio is the finite series
    e^(-x) sum_{k<m} x^k / k!, summed in the log domain so no partial
    term can overflow or underflow on the way to a representable result.
    """
    if int(m) != m or m < 1:
        raise ValueError("shape m must be a positive integer")
    if m > _MAX_SHAPE:
        raise ValueError(f"shape m above {_MAX_SHAPE} is unsupported")
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 1.0
    k, log_fact = _series_grid(int(m))
    log_terms = k * math.log(x) - x - log_fact
    # every term is a Poisson pmf value, so the running maximum is <= 0
    # and rescaling by it can neither overflow nor flush the tail
    peak = log_terms.max()
    return float(min(1.0, math.exp(peak) * np.exp(log_terms - peak).sum()))


@lru_cache(maxsize=None)
def _quantile_cached(m: int, phi: float) -> float:
    # I(m, q/2) falls monotonically from 1 at q = 0, so bracket by
    # doubling from the distribution mean 2m and bisect.
    def gap(q: float) -> float:
        return regularized_upper_gamma(m, 0.5 * q) - phi

    lo, hi = 0.0, 2.0 * m
    for _ in range(200):
        if gap(hi) <= 0.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NumericalError("could not bracket the test quantile")
    try:
        return float(bisect(gap, lo, hi, xtol=1e-12, rtol=1e-10,
                            maxiter=300))
    except RuntimeError as exc:  # pragma: no cover - defensive
        raise NumericalError(f"quantile bisection failed: {exc}") from exc


def test_quantile(m: int, phi: float) -> float:
    """Threshold Q with upper-tail probability ``phi`` under 2m unit draws.

    Solves regularized_upper_gamma(m, Q/2) = phi by bracketed bisection
    to 1e-10 relative accuracy; Q is where the summed squares of the 2m
    normalized outcomes separate the two hypotheses.
    """
    if int(m) != m or m < 1:
        raise ValueError("shape m must be a positive integer")
    if not 0.0 < phi < 1.0:
        raise ValueError("phi must lie strictly inside (0, 1)")
    return _quantile_cached(int(m), float(phi))


def _check_monotone_regime(cell: CellSpec, n_s: float) -> None:
    """The test reads variance order as bit order; verify that holds."""
    mu = 2.0 * n_s + 1.0
    beta = 2.0 * cell.nbar + 1.0
    num = mu * mu - 1.0
    den = (cell.eps - beta + mu) ** 2
    for u in (0, 1):
        r_u = cell.reflectivity(u)
        if r_u * den >= num:
            raise ModelRegimeError(
                "the variance test needs V(u) decreasing in reflectivity, "
                f"which requires r_u < (mu^2 - 1)/(eps - beta + mu)^2; "
                f"r_{u} = {r_u} violates it at n_s = {n_s}"
            )


def p_test(cell: CellSpec, energy_n: float,
           config: ReceiverConfig) -> TestStatistics:
    """Closed-form error probability of the one-tailed variance test.

    The total energy is split as n_s = N/m per copy; the 2m normalized
    homodyne outcomes are summed in squares and compared against the
    quantile Q at level ``phi``.  The reported error is the average of
    accepting the quiet hypothesis on the noisy bit and vice versa.
    """
    if energy_n <= 0.0:
        raise ValueError("energy_n must be positive")
    n_s = energy_n / config.m
    _check_monotone_regime(cell, n_s)
    v0 = conditional_variance(cell, 0, n_s)
    v1 = conditional_variance(cell, 1, n_s)
    v_hi, v_lo = max(v0, v1), min(v0, v1)
    sigma = (v_hi - v_lo) / v_lo
    q = test_quantile(config.m, config.phi)
    accept_null_on_quiet = regularized_upper_gamma(config.m, 0.5 * q)
    stay_above_on_noisy = regularized_upper_gamma(
        config.m, 0.5 * q / (1.0 + sigma))
    return TestStatistics(
        v0=v0, v1=v1, sigma=sigma, quantile=q,
        p_h0_given_h1=accept_null_on_quiet,
        p_h1_given_h0=1.0 - stay_above_on_noisy,
        p_test=0.5 + 0.5 * (accept_null_on_quiet - stay_above_on_noisy),
    )


def _block_sizes(n: int):
    for start in range(0, n, _BLOCK):
        yield start // _BLOCK, min(_BLOCK, n - start)


def monte_carlo_error(cell: CellSpec, energy_n: float, config: ReceiverConfig,
                      trials: int, seed: int,
                      mode: str = "direct") -> MonteCarloResult:
    """Empirical test error from simulated homodyne records.

    Both bits are simulated ``trials // 2`` times.  ``mode="direct"``
    draws each outcome straight from its known conditional variance;
    ``mode="full"`` samples all four quadratures of the two returning
    modes and forms the difference/sum pair explicitly, as a
    cross-check of that shortcut.  Blocks of 8192 trials are seeded by
    (seed, bit, block index), so a rerun with the same seed is
    bit-identical no matter how the blocks are scheduled.
    """
    trials = int(trials)
    if trials < 10 ** 3:
        raise ValueError("need at least 1e3 trials")
    if mode not in ("direct", "full"):
        raise ValueError("mode must be 'direct' or 'full'")
    stats = p_test(cell, energy_n, config)
    n_s = energy_n / config.m
    v_lo = min(stats.v0, stats.v1)
    # the null hypothesis is the larger-variance bit; a variance tie is
    # broken toward bit 0 (either labeling estimates the same 1/2)
    u_null = 0 if stats.v0 >= stats.v1 else 1
    n_per = trials // 2
    m = config.m

    rates = {}
    for u, v_u in ((0, stats.v0), (1, stats.v1)):
        if mode == "full":
            chol = np.linalg.cholesky(conditional_output_cm(cell, u, n_s))
        errors = 0
        for block, size in _block_sizes(n_per):
            rng = np.random.default_rng([seed, u, block])
            if mode == "direct":
                z = rng.normal(0.0, math.sqrt(v_u), size=(size, 2 * m))
            else:
                raw = rng.standard_normal((size, m, 4)) @ chol.T
                q_minus = (raw[:, :, 0] - raw[:, :, 2]) / math.sqrt(2.0)
                p_plus = (raw[:, :, 1] + raw[:, :, 3]) / math.sqrt(2.0)
                z = np.concatenate([q_minus, p_plus], axis=1)
            theta = np.einsum("ij,ij->i", z, z) / v_lo
            accept_null = theta >= stats.quantile
            # wrong whenever the decision lands on the other bit
            if u == u_null:
                errors += size - int(np.count_nonzero(accept_null))
            else:
                errors += int(np.count_nonzero(accept_null))
        rates[u] = errors / n_per

    estimate = 0.5 * (rates[0] + rates[1])
    std_error = 0.5 * math.sqrt(
        sum(r * (1.0 - r) / n_per for r in rates.values()))
    return MonteCarloResult(estimate=estimate, std_error=std_error,
                            trials=2 * n_per)


def optimize_g_test(cell: CellSpec, energy_n: float, m_range=None,
                    phi_grid=None,
                    m_star: Optional[float] = None) -> GTestResult:
    """Exhaustively maximize the test's information gain over (m, phi).

    g_test = H(C) - H(p_test) bits per cell, with C the classical floor
    (at the bandwidth cap ``m_star`` when the cell has environment
    noise).  Defaults scan m = 1..256 against 50 log-spaced levels in
    [1e-6, 0.5], at which resolution the surface is smooth.
    """
    if m_range is None:
        m_range = range(1, 257)
    m_values = tuple(int(m) for m in m_range)
    if not m_values:
        raise ValueError("m_range must be non-empty")
    if any(m < 1 for m in m_values):
        raise ValueError("every m must be a positive integer")
    if phi_grid is None:
        phi_values = np.geomspace(1e-6, 0.5, 50)
    else:
        phi_values = np.asarray(phi_grid, dtype=float)
    if phi_values.size == 0:
        raise ValueError("phi_grid must be non-empty")
    if np.any((phi_values <= 0.0) | (phi_values >= 1.0)):
        raise ValueError("phi values must lie strictly inside (0, 1)")

    h_classical = binary_entropy(_classical_reference(cell, energy_n,
                                                      m_star).value)
    surface = np.empty((len(m_values), phi_values.size))
    best = (-np.inf, m_values[0], float(phi_values[0]))
    for i, m in enumerate(m_values):
        for j, phi in enumerate(phi_values):
            stats = p_test(cell, energy_n, ReceiverConfig(m=m, phi=float(phi)))
            g = h_classical - binary_entropy(stats.p_test)
            surface[i, j] = g
            if g > best[0]:
                best = (g, m, float(phi))
    return GTestResult(best_g=best[0], best_m=best[1], best_phi=best[2],
                       surface=surface, m_values=m_values,
                       phi_values=phi_values)
