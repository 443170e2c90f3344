from django.core.management.base import BaseCommand

from unimodular.cli import (
    add_output_arguments, add_poly_argument, build_report, command_errors,
    config_from_options, emit, parse_poly_spec, plot_roots, stopwatch,
)
from unimodular.polycore import is_reciprocal, substitute_y_xn
from unimodular.rootfinder import census_kind, classify, find_roots


class Command(BaseCommand):
    help = 'Root census I/U/O of P(x, x^n), optionally with an SVG scatter of the roots'

    def add_arguments(self, parser):
        add_poly_argument(parser)
        parser.add_argument(
            '--n',
            type=int,
            required=True,
            help='Substitution exponent y = x^n'
        )
        parser.add_argument(
            '--plot',
            type=str,
            help='Write an SVG scatter of the roots to this path'
        )
        parser.add_argument(
            '--sectors',
            action='store_true',
            help='Draw the sector rays at 2 arccos(+-3/4) on the plot'
        )
        parser.add_argument(
            '--tau',
            type=float,
            help='Unimodular band (default from settings)'
        )
        add_output_arguments(parser)

    def handle(self, *args, **options):
        n = options['n']
        with command_errors():
            cfg = config_from_options(options)
            P, label = parse_poly_spec(options['poly'])
            if n < 1:
                raise ValueError('--n must be >= 1')
            with stopwatch() as clock:
                p = substitute_y_xn(P, n)
                rs = find_roots(p.to_cpoly(), cfg)
                census = classify(rs, cfg.tau)

        values = dict(census.as_dict(), c_ratio=census.c_ratio, kind=census_kind(census))
        diagnostics = {
            'n': n,
            'reciprocal': is_reciprocal(p),
            'iterations': rs.iterations,
            'max_residual': float(rs.residuals.max()) if rs.count else 0.0,
        }
        if options['plot']:
            plot_roots(rs.all_roots(), options['plot'], title=f'{label}, n = {n}',
                       sectors=options['sectors'])
            diagnostics['plot'] = options['plot']
            self.stdout.write(self.style.SUCCESS(f'Plot saved to {options["plot"]}'))

        report = build_report('roots', label, '', cfg, values, diagnostics, clock['seconds'])
        emit(self, report, options)
