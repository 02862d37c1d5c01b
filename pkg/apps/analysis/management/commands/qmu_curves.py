"""
Management command tabulating the orders q(mu, t) at which the Renyi
entropy of a stable law is stationary in mu
"""
import json

from django.core.management.base import BaseCommand, CommandError

from apps.analysis.services import AnalysisService, json_safe
from apps.analysis.types import OutputFormat
from apps.core.exceptions import ConfigurationError, MultifractalError
from apps.levy.services import q_mu_curve

CURVE_FIELDS = ('mu', 't', 'q', 'residual')


def _float_list(text):
    try:
        return [float(chunk) for chunk in text.split(',') if chunk.strip()]
    except ValueError:
        raise ConfigurationError(f"Cannot parse list '{text}'")


class Command(BaseCommand):
    help = 'Solves the q-mu stationarity condition on a grid of indices and horizons'

    def add_arguments(self, parser):
        parser.add_argument('--mu', type=str, default='0.25,0.5,0.75', help='Comma list of stability indices')
        parser.add_argument('--t', type=str, default='2,3,4,5', help='Comma list of integer horizons')
        parser.add_argument('--q-max', type=float, default=None, help='Upper end of the q search')
        parser.add_argument('--format', choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
        parser.add_argument('--output', type=str, help='Write records here instead of stdout')

    def handle(self, *args, **options):
        try:
            mus = _float_list(options['mu'])
            horizons = _float_list(options['t'])
            records = q_mu_curve(mus, horizons, q_max=options['q_max'])
        except MultifractalError as exc:
            self.stderr.write(json.dumps({'error': json_safe(exc.as_dict())}, sort_keys=True))
            raise CommandError(exc.message, returncode=exc.exit_code)

        unsolved = sum(1 for record in records if record['q'] is None)
        if unsolved:
            self.stderr.write(self.style.WARNING(f'{unsolved} of {len(records)} points have no solution'))
        text = AnalysisService.render(records, options['format'], CURVE_FIELDS)
        if options['output']:
            with open(options['output'], 'w') as handle:
                handle.write(text)
        else:
            self.stdout.write(text, ending='')
