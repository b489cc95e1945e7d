"""
Immigration-emigration process: births at rate lam, deaths at rate mu * x.

Paths are simulated event by event (Gillespie). The partial posterior of mu
given mu_hat and R = X0 + r1 is proportional to

    L = sum_{r=0}^{R} r U^r = U (1 - U)^-2 {1 - (R + 1) U^R + R U^(R + 1)},
    U = mu exp(-mu / mu_hat),

and T^(1/2) (mu - mu_hat) has the Gaussian limit N(0, mu_hat^2 / (c lam_hat)),
with c = 1 or 2 selectable.

The limit only describes L when mu_hat > e, so that U > 1 near mu_hat and the
U^R term dominates. For mu_hat < e the finite sum converges to U / (1 - U)^2 and
the partial posterior of mu does not concentrate as T grows.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from errors.errors import ArgumentError, DegenerateDataError
from models.grid import GridDensity

logger = logging.getLogger(__name__)

SINGULAR_BAND = 1e-6  # |U - 1| treated as the removable singularity
DIRECT_SUM_BAND = 1e-2  # |U - 1| where the closed form cancels badly


@dataclass(frozen=True)
class BirthDeathPath:
    event_times: np.ndarray
    states: np.ndarray  # X(T_i) right after each event
    r1: int
    r2: int
    area: float  # A_T = integral of X(t) over [0, T]
    horizon: float
    x0: int

    @property
    def event_count(self) -> int:
        return int(self.event_times.size)

    @property
    def final_state(self) -> int:
        return int(self.states[-1]) if self.states.size else self.x0

    def step_points(self) -> Tuple[np.ndarray, np.ndarray]:
        """(time, state) rows including the start at 0 and the horizon."""
        times = np.concatenate(([0.0], self.event_times, [self.horizon]))
        states = np.concatenate(([self.x0], self.states, [self.final_state]))
        return times, states


def simulate_birth_death(
    lam: float, mu: float, x0: int, horizon: float, stream: np.random.Generator
) -> BirthDeathPath:
    if lam < 0 or mu < 0:
        raise ArgumentError(f"rates must be nonnegative, got lam={lam}, mu={mu}")
    if x0 < 0 or horizon <= 0:
        raise ArgumentError(f"need x0 >= 0 and a positive horizon, got x0={x0}, T={horizon}")

    t, x, area = 0.0, int(x0), 0.0
    r1 = r2 = 0
    times, states = [], []
    while True:
        rate = lam + mu * x
        if rate <= 0:
            area += x * (horizon - t)
            break
        wait = stream.exponential(1.0 / rate)
        if t + wait >= horizon:
            area += x * (horizon - t)
            break
        area += x * wait
        t += wait
        if stream.random() * rate < lam:
            x += 1
            r1 += 1
        else:
            x -= 1
            r2 += 1
        times.append(t)
        states.append(x)

    logger.debug(f"Birth-death path: {r1} births, {r2} deaths, A_T={area:.6g}")
    return BirthDeathPath(
        event_times=np.array(times, dtype=float),
        states=np.array(states, dtype=np.int64),
        r1=r1,
        r2=r2,
        area=area,
        horizon=float(horizon),
        x0=int(x0),
    )


def iep_mle(path: BirthDeathPath) -> Tuple[float, float]:
    if path.area <= 0:
        raise DegenerateDataError("A_T is zero; the death-rate MLE is undefined")
    return path.r1 / path.horizon, path.r2 / path.area


def _log_u(mu: np.ndarray, mu_hat: float) -> np.ndarray:
    return np.log(mu) - mu / mu_hat


def _direct_log_sum(log_u: np.ndarray, R: int) -> np.ndarray:
    r = np.arange(1, R + 1, dtype=float)
    return logsumexp(np.log(r)[None, :] + np.outer(log_u, r), axis=1)


def _closed_form_log(log_u: np.ndarray, R: int) -> np.ndarray:
    u = np.exp(log_u)
    out = np.empty_like(log_u)
    below = u < 1
    if below.any():
        lu, uu = log_u[below], u[below]
        tail = np.exp(R * lu + np.log(R + 1 - R * uu))
        out[below] = lu - 2.0 * np.log1p(-uu) + np.log1p(-tail)
    above = ~below
    if above.any():
        lu, uu = log_u[above], u[above]
        inner = R * (uu - 1.0) - 1.0 + np.exp(-R * lu)
        out[above] = lu - 2.0 * np.log(uu - 1.0) + R * lu + np.log(inner)
    return out


def iep_partial_posterior_logpdf(mu, mu_hat: float, R: int):
    """log L(mu); -inf for mu <= 0."""
    if R < 0:
        raise ArgumentError(f"R = X0 + r1 must be nonnegative, got {R}")
    if not mu_hat > 0:
        raise ArgumentError(f"mu_hat must be positive, got {mu_hat}")
    mu = np.asarray(mu, dtype=float)
    flat = mu.ravel()
    result = np.full(flat.shape, -np.inf)
    if R == 0:
        return result.reshape(mu.shape)

    positive = flat > 0
    log_u = _log_u(flat[positive], mu_hat)
    gap = np.abs(np.expm1(log_u))
    values = np.empty_like(log_u)

    singular = gap <= SINGULAR_BAND
    direct = (gap > SINGULAR_BAND) & (gap < DIRECT_SUM_BAND)
    closed = gap >= DIRECT_SUM_BAND
    # first order expansion around U = 1: d log L / d log U = sum r^2 / sum r = (2R + 1) / 3
    values[singular] = np.log(R * (R + 1) / 2.0) + log_u[singular] * (2 * R + 1) / 3.0
    if direct.any():
        values[direct] = _direct_log_sum(log_u[direct], R)
    if closed.any():
        values[closed] = _closed_form_log(log_u[closed], R)

    result[positive] = values
    return result.reshape(mu.shape)


def iep_partial_posterior_unnormalized(mu, mu_hat: float, R: int):
    return np.exp(iep_partial_posterior_logpdf(mu, mu_hat, R))


def iep_partial_posterior_t_density(t_grid, mu_hat: float, R: int, horizon: float) -> GridDensity:
    """Grid-normalised density of t = T^(1/2) (mu - mu_hat)."""
    t_grid = np.asarray(t_grid, dtype=float)
    mu = mu_hat + t_grid / np.sqrt(horizon)
    return GridDensity.from_log_values(t_grid, iep_partial_posterior_logpdf(mu, mu_hat, R))


def iep_limit_density(t, lambda_hat: float, mu_hat: float, c: Literal[1, 2] = 1):
    if c not in (1, 2):
        raise ArgumentError(f"variance convention c must be 1 or 2, got {c}")
    if not (lambda_hat > 0 and mu_hat > 0):
        raise ArgumentError("lambda_hat and mu_hat must be positive")
    return stats.norm.pdf(t, loc=0.0, scale=mu_hat / np.sqrt(c * lambda_hat))


def gaussian_limit_applies(mu_hat: float) -> bool:
    """U exceeds 1 at mu = mu_hat exactly when mu_hat > e."""
    return mu_hat > np.e
