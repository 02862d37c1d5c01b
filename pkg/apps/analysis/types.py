"""
Run configuration and report containers for the analysis pipeline.
"""
import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from apps.histogram.types import BinWidthRule
from apps.levy.types import MuProfile


class Transform(str, enum.Enum):
    NONE = 'none'
    LOG_RETURNS = 'log-returns'


class Generator(str, enum.Enum):
    GAUSSIAN_WALK = 'gaussian-walk'
    LEVY_WALK = 'levy-walk'
    MULTISCALE = 'multiscale'


class OutputFormat(str, enum.Enum):
    JSON = 'json'
    CSV = 'csv'


# column order of the per-q records, shared by every writer
RECORD_FIELDS = (
    'q', 'h_star', 'delta', 'stderr', 'ci99_low', 'ci99_high', 'r2',
    'tau', 'alpha', 'f_alpha', 'd_q', 'warnings',
)
SURFACE_FIELDS = ('q', 's', 'windows', 'h', 'bins', 'H')


@dataclass(frozen=True)
class RunConfig:
    """
    One validated pipeline run. Exactly one of ``input_path``, ``values``
    and ``generator`` supplies the series.
    """
    input_path: Optional[str] = None
    values: Optional[Tuple[float, ...]] = None
    generator: Optional[Generator] = None
    length: int = 16384
    mu: float = 1.5
    mu_profile: Optional[MuProfile] = None
    base_scale: int = 1
    column: str = '0'
    transform: Transform = Transform.NONE
    rule: BinWidthRule = field(default_factory=BinWidthRule)
    q_min: Optional[float] = None
    q_max: Optional[float] = None
    q_step: Optional[float] = None
    allow_negative_q: bool = False
    scales: Optional[Tuple[int, ...]] = None
    compat: bool = False
    seed: int = 0
    output_format: OutputFormat = OutputFormat.JSON
    emit_surface: bool = False

    @property
    def source(self) -> str:
        if self.input_path:
            return f'file:{self.input_path}'
        if self.values is not None:
            return 'inline'
        return f'generator:{self.generator.value}'

    def as_dict(self) -> Dict[str, Any]:
        """JSON-safe form, stored with persisted runs."""
        return {
            'source': self.source,
            'length': self.length if self.generator else None,
            'mu': self.mu if self.generator is Generator.LEVY_WALK else None,
            'mu_profile': self.mu_profile.label if self.mu_profile else None,
            'base_scale': self.base_scale if self.generator is Generator.MULTISCALE else None,
            'column': self.column,
            'transform': self.transform.value,
            'rule': self.rule.label,
            'q_min': self.q_min,
            'q_max': self.q_max,
            'q_step': self.q_step,
            'allow_negative_q': self.allow_negative_q,
            'scales': list(self.scales) if self.scales else 'auto',
            'compat': self.compat,
            'seed': self.seed,
        }


@dataclass
class SpectrumReport:
    """Per-q records plus run metadata and, on request, the surface rows."""
    records: List[Dict[str, Any]]
    metadata: Dict[str, Any]
    surface: Optional[List[Dict[str, Any]]] = None

    def __len__(self):
        return len(self.records)
