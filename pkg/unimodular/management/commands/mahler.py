import math

from django.core.management.base import BaseCommand

from unimodular.cli import (
    add_output_arguments, add_poly_argument, build_report, command_errors,
    config_from_options, emit, parse_poly_spec, stopwatch,
)
from unimodular.measures import mahler_bi, mahler_bi_jensen, mahler_uni, s_measure
from unimodular.polycore import invert


class Command(BaseCommand):
    help = 'Mahler measure of P(x, y) on the torus (univariate inputs use the root product)'

    def add_arguments(self, parser):
        add_poly_argument(parser)
        parser.add_argument(
            '--method',
            choices=['torus', 'jensen'],
            default='torus',
            help='torus: tensor midpoint rule on log|P|; jensen: fiber roots + Jensen formula'
        )
        parser.add_argument(
            '--grid',
            type=int,
            dest='mahler_grid',
            help='Torus grid per axis for the torus method (default from settings)'
        )
        add_output_arguments(parser)

    def handle(self, *args, **options):
        method = options['method']
        with command_errors():
            cfg = config_from_options(options)
            if options['mahler_grid']:
                cfg = cfg.with_(mahler_grid=options['mahler_grid'])
            P, label = parse_poly_spec(options['poly'])
            with stopwatch() as clock:
                values = self.measure(P, method, cfg)

        report = build_report('mahler', label, method, cfg, values, {}, clock['seconds'])
        emit(self, report, options)

    def measure(self, P, method, cfg):
        if P.deg_y == 0 or P.deg_x == 0:
            p = (P if P.deg_y == 0 else invert(P)).column(0)
            if p.deg < 1:
                value = float(abs(p.leading))
                return {'mahler': value, 'log_mahler': math.log(value), 'univariate': True}
            value = mahler_uni(p.to_cpoly(), cfg)
            return {
                'mahler': value, 'log_mahler': math.log(value),
                's_measure': s_measure(p.to_cpoly(), cfg), 'univariate': True,
            }
        value = mahler_bi(P, cfg) if method == 'torus' else mahler_bi_jensen(P, cfg)
        return {'mahler': value, 'log_mahler': math.log(value), 'univariate': False}
