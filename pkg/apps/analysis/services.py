"""
The analysis pipeline: ingest or generate a series, collect fluctuations,
build the entropy surface, fit delta(q) and Legendre-transform it.
"""
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from apps.core.exceptions import DataFormatError, InsufficientDataError, MultifractalError
from apps.fluctuations.services import collect_fluctuations, log_returns, require_length, resolve_scales
from apps.fluctuations.types import FluctuationEnsemble, TimeSeries
from apps.histogram.services import bin_count
from apps.levy.services import gaussian_walk, generate_multiscale, levy_walk
from apps.spectrum.services import entropy_surface, fit_delta, legendre_spectrum
from apps.spectrum.types import EntropySurface, QGrid

from .models import AnalysisRun
from .types import (
    RECORD_FIELDS, SURFACE_FIELDS, Generator, OutputFormat, RunConfig, SpectrumReport, Transform,
)

logger = logging.getLogger(__name__)

LEGENDRE_UNDEFINED = 'legendre-undefined'
SIGNIFICANT_DIGITS = 12


def _number(value) -> Optional[float]:
    """12 significant digits; NaN and infinities become None."""
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f'{value:.{SIGNIFICANT_DIGITS}g}')


def _detect_separator(line: str) -> str:
    if ',' in line:
        return ','
    if '\t' in line:
        return '\t'
    return r'\s+'


def _to_float(text) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        return math.nan


def _is_number(text) -> bool:
    return not math.isnan(_to_float(text))


def json_safe(payload):
    """Error details as strict JSON values; non-finite floats become None."""
    if isinstance(payload, dict):
        return {str(key): json_safe(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple, np.ndarray)):
        return [json_safe(value) for value in payload]
    if isinstance(payload, (bool, np.bool_)):
        return bool(payload)
    if isinstance(payload, (int, np.integer)):
        return int(payload)
    if isinstance(payload, (float, np.floating)):
        return float(payload) if math.isfinite(payload) else None
    if payload is None or isinstance(payload, str):
        return payload
    return str(payload)


class AnalysisService:
    """
    Runs the pipeline for a RunConfig and optionally persists the result.
    """

    def ingest(self, path, column='0', transform=Transform.NONE) -> TimeSeries:
        """
        One numeric column of a delimited text file.

        The separator (comma, tab or whitespace) is taken from the first
        non-blank line, which is skipped as a header when the selected cell
        is not numeric. ``column`` is a 0-based index or a header name.
        """
        path = Path(path)
        try:
            text = path.read_text()
        except (OSError, UnicodeDecodeError) as exc:
            raise DataFormatError(f'Cannot read {path}', details={'reason': str(exc)})

        lines = text.splitlines()
        first = next((i for i, line in enumerate(lines) if line.strip()), None)
        if first is None:
            raise InsufficientDataError('Input file is empty', details={'path': str(path)})
        separator = _detect_separator(lines[first])

        try:
            frame = pd.read_csv(
                io.StringIO(text), sep=separator, header=None, dtype=str,
                skip_blank_lines=False, engine='python', skipinitialspace=True,
            )
        except (pd.errors.ParserError, ValueError) as exc:
            raise DataFormatError(f'Cannot parse {path}', details={'reason': str(exc)})
        # 1-based file line of each frame row
        frame.index = np.arange(1, len(frame) + 1)
        frame = frame.dropna(how='all')

        header = [str(cell).strip() for cell in frame.iloc[0].tolist()]
        index = self._column_index(column, header)
        if index >= frame.shape[1]:
            raise DataFormatError(
                f'Column {index} does not exist',
                details={'columns': int(frame.shape[1])},
            )
        if not _is_number(header[index]):
            logger.debug('Skipping header line %s', frame.index[0])
            frame = frame.iloc[1:]

        cells = frame.iloc[:, index]
        values = cells.map(_to_float)
        bad = values.index[~np.isfinite(values.to_numpy(dtype=float))]
        if len(bad):
            raise DataFormatError(
                'Non-numeric values in the selected column',
                details={'lines': [int(i) for i in bad[:20]], 'count': int(len(bad))},
            )
        if values.empty:
            raise InsufficientDataError('No data rows', details={'path': str(path)})

        series = TimeSeries(values.to_numpy(dtype=float), name=path.name)
        logger.info('Read %d values from %s', len(series), path)
        if Transform(transform) is Transform.LOG_RETURNS:
            if len(series) < 2:
                raise InsufficientDataError('Log returns need at least two prices', details={'length': len(series)})
            series = log_returns(series)
        return series

    @staticmethod
    def _column_index(column, header: Sequence[str]) -> int:
        column = str(column).strip()
        if column.isdigit():
            return int(column)
        if column in header:
            return header.index(column)
        raise DataFormatError(f"No column named '{column}'", details={'header': list(header)})

    def load_series(self, config: RunConfig) -> TimeSeries:
        if config.input_path:
            return self.ingest(config.input_path, config.column, config.transform)
        if config.values is not None:
            series = TimeSeries(np.asarray(config.values, dtype=float), name='inline')
            return log_returns(series) if config.transform is Transform.LOG_RETURNS else series
        if config.generator is Generator.GAUSSIAN_WALK:
            return gaussian_walk(config.length, config.seed)
        if config.generator is Generator.LEVY_WALK:
            return levy_walk(config.mu, config.length, config.seed, name=f'levy-walk[{config.mu!r}]')
        scale = config.base_scale
        return generate_multiscale(config.mu_profile, scale, config.length * scale, config.seed)

    def run(self, config: RunConfig) -> SpectrumReport:
        """
        Execute the whole pipeline; one record per q on the grid.
        """
        series = self.load_series(config)
        require_length(series)
        scales = resolve_scales(len(series), config.scales)
        ensemble = collect_fluctuations(series, scales, compat=config.compat)
        q_grid = QGrid.from_range(config.q_min, config.q_max, config.q_step, config.allow_negative_q)
        logger.info(
            'Running %s: N=%d, %d scales, %d q values, rule %s',
            series.name or config.source, len(series), len(scales), len(q_grid), config.rule.label,
        )

        surface = entropy_surface(ensemble, q_grid, config.rule)
        result = fit_delta(surface)
        q = result.q_values
        notes: List[str] = []
        if len(q_grid) >= 3:
            spectrum = legendre_spectrum(result, q_grid)
            tau, alpha, f_alpha, d_q = spectrum.tau, spectrum.alpha, spectrum.f_alpha, spectrum.generalized_dimension()
            notes.extend(spectrum.notes)
            extra = ()
        else:
            logger.warning('q-grid has %d points; alpha and f(alpha) left undefined', len(q_grid))
            tau = (q - 1.0) * result.deltas
            d_q = result.deltas
            alpha = f_alpha = np.full(q.size, math.nan)
            extra = (LEGENDRE_UNDEFINED,)

        records = []
        for j, fit in enumerate(result):
            records.append({
                'q': _number(fit.q),
                'h_star': _number(surface.bin_widths[j]),
                'delta': _number(fit.delta),
                'stderr': _number(fit.stderr),
                'ci99_low': _number(fit.ci_low),
                'ci99_high': _number(fit.ci_high),
                'r2': _number(fit.r_squared),
                'tau': _number(tau[j]),
                'alpha': _number(alpha[j]),
                'f_alpha': _number(f_alpha[j]),
                'd_q': _number(d_q[j]),
                'warnings': list(fit.warnings + extra),
            })

        metadata = {
            'source': config.source,
            'series_name': series.name,
            'series_length': len(series),
            'scales': list(ensemble.scales),
            'window_counts': {str(s): n for s, n in ensemble.window_counts().items()},
            'missing_scales': list(surface.missing_scales),
            'rule': config.rule.label,
            'ci_level': result.ci_level,
            'compat': config.compat,
            'seed': config.seed,
            'notes': notes,
        }
        surface_rows = self.surface_rows(ensemble, surface) if config.emit_surface else None
        return SpectrumReport(records=records, metadata=metadata, surface=surface_rows)

    @staticmethod
    def surface_rows(ensemble: FluctuationEnsemble, surface: EntropySurface) -> List[Dict[str, Any]]:
        """(q, s, H) rows with the window count, width and bin count behind each cell."""
        windows = ensemble.window_counts()
        ranges = {s: float(sums.max() - sums.min()) for s, sums in ensemble}
        rows = []
        for j, q in enumerate(surface.q_grid.values):
            h = float(surface.bin_widths[j])
            for i, s in enumerate(surface.scales):
                rows.append({
                    'q': _number(q),
                    's': s,
                    'windows': windows[s],
                    'h': _number(h),
                    'bins': bin_count(ranges[s], h, ensemble.compat),
                    'H': _number(surface.entropies[j, i]),
                })
        return rows

    @staticmethod
    def render(rows: Iterable[Dict[str, Any]], output_format=OutputFormat.JSON, fields: Sequence[str] = RECORD_FIELDS) -> str:
        """
        JSON array or CSV with a header row. Both carry the same numbers;
        undefined values are null in JSON and empty in CSV.
        """
        rows = list(rows)
        if OutputFormat(output_format) is OutputFormat.JSON:
            return json.dumps(rows, indent=2) + '\n'
        frame = pd.DataFrame(rows, columns=list(fields))
        if 'warnings' in frame:
            frame['warnings'] = frame['warnings'].map(lambda items: ';'.join(items))
        return frame.to_csv(index=False, float_format=f'%.{SIGNIFICANT_DIGITS}g', na_rep='', lineterminator='\n')

    def render_report(self, report: SpectrumReport, output_format=OutputFormat.JSON) -> str:
        return self.render(report.records, output_format, RECORD_FIELDS)

    def render_surface(self, report: SpectrumReport, output_format=OutputFormat.JSON) -> str:
        return self.render(report.surface or [], output_format, SURFACE_FIELDS)

    def save(self, config: RunConfig, report: SpectrumReport) -> AnalysisRun:
        run = AnalysisRun.objects.create(
            source=config.source,
            rule=config.rule.label,
            status=AnalysisRun.Status.COMPLETED,
            series_length=report.metadata.get('series_length'),
            config=config.as_dict(),
            records=report.records,
            metadata=report.metadata,
            surface=report.surface,
        )
        logger.info('Saved analysis run %s', run.id)
        return run

    def save_failure(self, config: RunConfig, exc: MultifractalError) -> AnalysisRun:
        run = AnalysisRun.objects.create(
            source=config.source,
            rule=config.rule.label,
            status=AnalysisRun.Status.FAILED,
            config=config.as_dict(),
            error=json_safe(exc.as_dict()),
        )
        logger.warning('Analysis run %s failed: %s', run.id, exc.message)
        return run
