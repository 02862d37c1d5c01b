"""
Symmetric stable sampling, heterogeneous multi-scale series and the q-mu
stationarity relation.

For a process whose increments at scale s are stable with index mu(s), the
Renyi entropy of order q has a stationary point in mu exactly when

    F(q) = ln t / mu^2 + q / (q - 1) * I1 / I2 = 0,
    I1 = int dL/dmu L^(q-1),   I2 = int L^q,   L = L_{1,mu}.

The integrals exist only for q > 1 / (1 + mu). F is positive just above
q = 1 and tends to (ln t - digamma(1 + 1/mu)) / mu^2 as q grows, so a
solution exists only while t < exp(digamma(1 + 1/mu)); outside that range
the solver reports no solution.

In the Shannon limit q -> 1 the same condition forces dmu/ds = 0: Shannon
entropy only sees monofractal scaling, which is why the order-q entropies
are needed at all.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np
from scipy import integrate, optimize
from scipy.special import digamma, gamma

from apps.core.conf import mfdea_setting
from apps.core.exceptions import ConfigurationError, DivergentIntegralError
from apps.fluctuations.types import TimeSeries

from .density import peak_density, tail_coefficient, unit_pdf
from .types import MuProfile, StableParams

logger = logging.getLogger(__name__)

TABLE_START = 1e-4
TABLE_POINTS_PER_DECADE = 40
# smallest right end of the tabulated range
TABLE_MIN_END = 100.0
SOLVER_Q_START = 1.001
SOLVER_SCAN_POINTS = 300


def stable_sample(params: StableParams, n: int, seed: int) -> np.ndarray:
    """
    n symmetric stable draws by the Chambers-Mallows-Stuck transform.
    """
    if n < 1:
        raise ConfigurationError('Sample size must be positive', details={'n': n})
    rng = np.random.default_rng(seed)
    mu = params.mu
    angle = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size=n)
    weight = rng.exponential(1.0, size=n)
    if mu == 1.0:
        draws = np.tan(angle)
    else:
        draws = (
            np.sin(mu * angle) / np.cos(angle) ** (1.0 / mu)
            * (np.cos((1.0 - mu) * angle) / weight) ** ((1.0 - mu) / mu)
        )
    return params.width * draws


def levy_walk(mu: float, length: int, seed: int, name: str = 'levy-walk') -> TimeSeries:
    """Increments of a walk with unit-scale mu-stable steps."""
    return TimeSeries(stable_sample(StableParams(mu), length, seed), name=name)


def gaussian_walk(length: int, seed: int) -> TimeSeries:
    rng = np.random.default_rng(seed)
    return TimeSeries(rng.standard_normal(length), name='gaussian-walk')


def generate_multiscale(profile: MuProfile, scale: int, horizon: int, seed: int) -> TimeSeries:
    """
    m = horizon / scale independent increments, each s^(1/mu(s)) times a
    unit mu(s)-stable draw.
    """
    if scale < 1 or horizon < 1:
        raise ConfigurationError('Scale and horizon must be positive', details={'scale': scale, 'horizon': horizon})
    if horizon % scale:
        raise ConfigurationError(
            'Horizon must be a multiple of the scale',
            details={'scale': scale, 'horizon': horizon},
        )
    mu = profile.mu_at(scale)
    steps = horizon // scale
    unit = stable_sample(StableParams(mu), steps, seed)
    logger.debug('Multiscale series: %d increments at s=%d, mu=%s', steps, scale, mu)
    return TimeSeries(scale ** (1.0 / mu) * unit, lag=float(scale), name=f'multiscale[{profile.label}]')


def _tail_coefficient_derivative(mu: float) -> float:
    half = math.pi * mu / 2.0
    return gamma(mu + 1.0) * (digamma(mu + 1.0) * math.sin(half) + math.pi / 2.0 * math.cos(half)) / math.pi


@dataclass
class StableTable:
    """
    L_{1,mu} (and optionally dL/dmu) tabulated on 0 plus a log-spaced grid,
    with the power-law tail beyond the grid integrated in closed form.
    """
    mu: float
    x: np.ndarray
    density: np.ndarray
    derivative: Optional[np.ndarray]
    log_step: float

    @classmethod
    def build(cls, mu: float, q_min: float, with_derivative: bool = False) -> 'StableTable':
        if not 0 < mu <= 2:
            raise ConfigurationError('Stability index must lie in (0, 2]', details={'mu': mu})
        end = TABLE_MIN_END
        coefficient = tail_coefficient(mu)
        if mu < 2 and coefficient > 0:
            tolerance = mfdea_setting('SOLVER_TAIL_TOL')
            end = max(end, (coefficient / tolerance ** (1.0 / q_min)) ** (1.0 / (1.0 + mu)))
        decades = math.log10(end / TABLE_START)
        count = 2 * int(math.ceil(decades * TABLE_POINTS_PER_DECADE / 2.0)) + 1
        grid = np.geomspace(TABLE_START, end, count)
        x = np.concatenate(([0.0], grid))
        density = np.array([unit_pdf(v, mu) for v in x])

        derivative = None
        if with_derivative:
            step = mfdea_setting('SOLVER_MU_STEP')
            upper = np.array([unit_pdf(v, mu + step) for v in x])
            lower = np.array([unit_pdf(v, mu - step) for v in x])
            derivative = (upper - lower) / (2.0 * step)
        logger.debug('Stable table for mu=%s: %d points up to %.3g', mu, x.size, end)
        return cls(mu=mu, x=x, density=density, derivative=derivative, log_step=math.log(grid[1] / grid[0]))

    @property
    def end(self) -> float:
        return float(self.x[-1])

    def _half_line(self, values: np.ndarray) -> float:
        """int_0^end on the tabulated grid."""
        head = 0.5 * self.x[1] * (values[0] + values[1])
        body = integrate.simpson(values[1:] * self.x[1:], dx=self.log_step)
        return float(head + body)

    def _tail_exponent(self, q: float) -> float:
        return (1.0 + self.mu) * q - 1.0

    def scaled_power_integral(self, q: float) -> float:
        """int_0^inf (L / L(0))^q."""
        peak = self.density[0]
        ratio = self.density / peak
        value = self._half_line(ratio ** q)
        coefficient = tail_coefficient(self.mu)
        if self.mu < 2 and coefficient > 0:
            p = self._tail_exponent(q)
            value += (coefficient / peak) ** q * self.end ** (-p) / p
        return value

    def scaled_derivative_integral(self, q: float) -> float:
        """int_0^inf dL/dmu (L / L(0))^(q-1)."""
        if self.derivative is None:
            raise ConfigurationError('Table was built without the mu-derivative')
        peak = self.density[0]
        ratio = self.density / peak
        value = self._half_line(self.derivative * ratio ** (q - 1.0))
        coefficient = tail_coefficient(self.mu)
        if self.mu < 2 and coefficient > 0:
            p = self._tail_exponent(q)
            end = self.end
            decay = end ** (-p)
            slope = _tail_coefficient_derivative(self.mu)
            # dL/dmu ~ (c' - c ln x) x^-(1+mu) beyond the grid
            tail = slope * decay / p - coefficient * decay * (math.log(end) / p + 1.0 / p ** 2)
            value += (coefficient / peak) ** (q - 1.0) * tail
        return value

    def residual(self, q: float, t: float) -> float:
        """F(q) = ln t / mu^2 + q / (q - 1) * I1 / I2."""
        ratio = self.scaled_derivative_integral(q) / (self.density[0] * self.scaled_power_integral(q))
        return math.log(t) / self.mu ** 2 + q / (q - 1.0) * ratio


def _check_renyi_order(mu: float, q: float) -> None:
    if mu < 2 and q <= 1.0 / (1.0 + mu):
        raise DivergentIntegralError(
            'int L^q diverges for q <= 1 / (1 + mu)',
            details={'mu': mu, 'q': q, 'bound': 1.0 / (1.0 + mu)},
        )
    if q <= 0:
        raise DivergentIntegralError('int L^q needs q > 0', details={'q': q})


def renyi_integral(mu: float, q: float, scale: float = 1.0) -> float:
    """
    int L_{s,mu}^q over the real line.
    """
    _check_renyi_order(mu, q)
    params = StableParams(mu, scale)
    # the scale only rescales: int L_s^q = s^((1-q)/mu) int L_1^q
    factor = params.width ** (1.0 - q)
    if mu == 2.0:
        return factor * (4.0 * math.pi) ** ((1.0 - q) / 2.0) / math.sqrt(q)
    table = StableTable.build(mu, q_min=q)
    return factor * 2.0 * peak_density(mu) ** q * table.scaled_power_integral(q)


def _check_solver_input(mu: float, t: float) -> None:
    if not 0 < mu < 2 - mfdea_setting('SOLVER_MU_STEP'):
        raise ConfigurationError('Solver needs 0 < mu < 2', details={'mu': mu})
    if t < 2 or int(t) != t:
        raise ConfigurationError('Horizon t must be an integer >= 2', details={'t': t})


def _q_scan(q_max: float) -> np.ndarray:
    return 1.0 + np.geomspace(SOLVER_Q_START - 1.0, q_max - 1.0, SOLVER_SCAN_POINTS)


def _solve_on_table(table: StableTable, t: int, q_max: float) -> Optional[float]:
    scan = _q_scan(q_max)
    values = np.array([table.residual(q, t) for q in scan])
    crossings = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)
    if not crossings.size:
        logger.warning('No q solves the stationarity condition for mu=%s, t=%s', table.mu, t)
        return None
    lower, upper = scan[crossings[0]], scan[crossings[0] + 1]
    return float(optimize.bisect(lambda q: table.residual(q, t), lower, upper, xtol=1e-12, rtol=1e-12))


def q_mu_residual(q: float, mu: float, t: int) -> float:
    """The stationarity bracket F(q) at one point."""
    _check_solver_input(mu, t)
    if q <= 1:
        raise ConfigurationError('The stationarity condition needs q > 1', details={'q': q})
    table = StableTable.build(mu, q_min=SOLVER_Q_START, with_derivative=True)
    return table.residual(q, t)


def solve_q_mu(mu: float, t: int, q_max: Optional[float] = None) -> Optional[float]:
    """
    The order q > 1 at which the entropy is stationary in mu, or None when
    F has no sign change on (1.001, q_max].
    """
    _check_solver_input(mu, t)
    q_max = mfdea_setting('SOLVER_Q_MAX') if q_max is None else q_max
    table = StableTable.build(mu, q_min=SOLVER_Q_START, with_derivative=True)
    return _solve_on_table(table, int(t), q_max)


def q_mu_curve(mus: Iterable[float], horizons: Iterable[int], q_max: Optional[float] = None) -> List[Dict]:
    """
    Solutions q(mu, t) on a grid, one table per mu.
    """
    q_max = mfdea_setting('SOLVER_Q_MAX') if q_max is None else q_max
    mus, horizons = list(mus), list(horizons)
    for mu in mus:
        for t in horizons:
            _check_solver_input(mu, t)
    horizons = [int(t) for t in horizons]
    records = []
    for mu in mus:
        table = StableTable.build(mu, q_min=SOLVER_Q_START, with_derivative=True)
        for t in horizons:
            q = _solve_on_table(table, t, q_max)
            residual = table.residual(q, t) if q is not None else None
            records.append({'mu': float(mu), 't': t, 'q': q, 'residual': residual})
    return records

