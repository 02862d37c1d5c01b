"""
Management command running the multifractal diffusion entropy pipeline
"""
import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.analysis.serializers import RunConfigSerializer
from apps.analysis.services import AnalysisService, json_safe
from apps.analysis.types import Generator, OutputFormat, Transform
from apps.core.exceptions import ConfigurationError, MultifractalError


class Command(BaseCommand):
    help = 'Estimates the delta(q) spectrum of a series and writes per-q records'

    def add_arguments(self, parser):
        source = parser.add_argument_group('source')
        source.add_argument('--input', type=str, help='Delimited text file with the series')
        source.add_argument('--column', type=str, default='0', help='Column index (0-based) or header name')
        source.add_argument(
            '--transform',
            choices=[t.value for t in Transform],
            default=Transform.NONE.value,
            help='Apply log returns to the selected column'
        )
        source.add_argument(
            '--generate',
            choices=[g.value for g in Generator],
            help='Use a synthetic series instead of --input'
        )
        source.add_argument('--length', type=int, default=16384, help='Generated series length')
        source.add_argument('--mu', type=float, default=1.5, help='Stability index for levy-walk')
        source.add_argument('--mu-profile', type=str, help="Scale-dependent index, e.g. '1:1.9,64:1.5'")
        source.add_argument('--base-scale', type=int, default=1, help='Increment scale for multiscale series')
        source.add_argument('--seed', type=int, default=0, help='Seed for generated series')

        pipeline = parser.add_argument_group('pipeline')
        pipeline.add_argument('--rule', type=str, default='scott', help='scott, fd, scott-single, sturges or fixed:<h>')
        pipeline.add_argument('--q-min', type=float, default=None)
        pipeline.add_argument('--q-max', type=float, default=None)
        pipeline.add_argument('--q-step', type=float, default=None)
        pipeline.add_argument('--allow-negative-q', action='store_true', help='Accept q < 0 on the grid')
        pipeline.add_argument('--scales', type=str, default='auto', help="'auto' or a comma list such as 4,8,16")
        pipeline.add_argument(
            '--compat-r',
            action='store_true',
            help='N - s windows per scale and floor(range/h) + 1 bins'
        )

        output = parser.add_argument_group('output')
        output.add_argument('--format', choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
        output.add_argument('--output', type=str, help='Write records here instead of stdout')
        output.add_argument('--emit-surface', type=str, metavar='PATH', help='Also write the (q, s, H) surface')
        output.add_argument('--save', action='store_true', help='Store the run in the database')

    def handle(self, *args, **options):
        serializer = RunConfigSerializer(data=self._payload(options), context={'allow_path': True})
        if not serializer.is_valid():
            self._fail(ConfigurationError('Invalid run configuration', details=serializer.errors))
        config = serializer.to_config()

        service = AnalysisService()
        try:
            report = service.run(config)
        except MultifractalError as exc:
            if options['save']:
                service.save_failure(config, exc)
            self._fail(exc)

        self._write(service.render_report(report, config.output_format), options['output'])
        if options['emit_surface']:
            self._write(service.render_surface(report, config.output_format), options['emit_surface'])
        if options['save']:
            run = service.save(config, report)
            self.stderr.write(self.style.SUCCESS(f'Saved run {run.id}'))

    def _payload(self, options):
        payload = {
            'input': options['input'],
            'generator': options['generate'],
            'length': options['length'],
            'mu': options['mu'],
            'mu_profile': options['mu_profile'],
            'base_scale': options['base_scale'],
            'column': options['column'],
            'transform': options['transform'],
            'rule': options['rule'],
            'q_min': options['q_min'],
            'q_max': options['q_max'],
            'q_step': options['q_step'],
            'allow_negative_q': options['allow_negative_q'],
            'scales': options['scales'],
            'compat': options['compat_r'],
            'seed': options['seed'],
            'format': options['format'],
            'emit_surface': bool(options['emit_surface']),
        }
        return {key: value for key, value in payload.items() if value is not None}

    def _write(self, text, path):
        if path:
            Path(path).write_text(text)
        else:
            self.stdout.write(text, ending='')

    def _fail(self, exc: MultifractalError):
        self.stderr.write(json.dumps({'error': json_safe(exc.as_dict())}, sort_keys=True))
        raise CommandError(exc.message, returncode=exc.exit_code)
