"""
Parameter types for symmetric stable laws and scale-dependent indices.
"""
import bisect
from dataclasses import dataclass
from typing import Tuple

from apps.core.exceptions import ConfigurationError
from apps.core.validators import PositiveValidator


def _check_mu(mu: float) -> float:
    mu = float(mu)
    if not (0.0 < mu <= 2.0):
        raise ConfigurationError('Stability index must lie in (0, 2]', details={'mu': mu})
    return mu


@dataclass(frozen=True)
class StableParams:
    """
    Symmetric stable law with characteristic function exp(-scale |k|^mu).
    """
    mu: float
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'mu', _check_mu(self.mu))
        PositiveValidator('scale')(self.scale)

    @property
    def width(self) -> float:
        """scale^(1/mu): the factor mapping the unit law onto this one."""
        return self.scale ** (1.0 / self.mu)


@dataclass(frozen=True)
class MuProfile:
    """
    Piecewise-constant map s -> mu(s).

    ``steps`` holds (first scale, mu) pairs in increasing scale order; a
    scale below the first step takes the first value.
    """
    steps: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        steps = tuple((int(s), _check_mu(mu)) for s, mu in self.steps)
        if not steps:
            raise ConfigurationError('Mu profile is empty')
        starts = [s for s, _ in steps]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ConfigurationError('Mu profile scales must increase', details={'scales': starts})
        object.__setattr__(self, 'steps', steps)

    @classmethod
    def constant(cls, mu: float) -> 'MuProfile':
        return cls(((1, mu),))

    @classmethod
    def parse(cls, text: str) -> 'MuProfile':
        """
        ``'1.8'`` for a constant index, or ``'1:1.8,64:1.5'`` for a step table.
        """
        try:
            if ':' not in text:
                return cls.constant(float(text))
            pairs = []
            for chunk in text.split(','):
                scale, _, mu = chunk.partition(':')
                pairs.append((int(scale), float(mu)))
        except ValueError:
            raise ConfigurationError(f"Cannot parse mu profile '{text}'")
        return cls(tuple(pairs))

    def mu_at(self, scale: int) -> float:
        starts = [s for s, _ in self.steps]
        index = max(bisect.bisect_right(starts, int(scale)) - 1, 0)
        return self.steps[index][1]

    def delta_at(self, scale: int) -> float:
        return 1.0 / self.mu_at(scale)

    @property
    def label(self) -> str:
        return ','.join(f'{s}:{mu!r}' for s, mu in self.steps)
