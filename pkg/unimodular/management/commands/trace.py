from django.core.management.base import BaseCommand

from unimodular.cli import (
    add_output_arguments, add_poly_argument, build_report, command_errors,
    config_from_options, emit, parse_poly_spec, stopwatch,
)
from unimodular.exceptions import BadSpec, QuadratureNonconvergent
from unimodular.measures import boyd_lawton_trace, mahler_bi


class Command(BaseCommand):
    help = 'Trace M(P(x, x^n)) over a list of n towards the torus measure M(P)'

    def add_arguments(self, parser):
        add_poly_argument(parser)
        parser.add_argument(
            '--n',
            type=str,
            required=True,
            help='Comma separated exponents, e.g. 20,40,80'
        )
        parser.add_argument(
            '--no-limit',
            action='store_true',
            help='Skip the torus measure used as reference'
        )
        add_output_arguments(parser)

    def handle(self, *args, **options):
        with command_errors():
            try:
                n_list = [int(v) for v in options['n'].split(',') if v.strip()]
            except ValueError as exc:
                raise BadSpec(f'bad --n list {options["n"]!r}') from exc
            cfg = config_from_options(options)
            P, label = parse_poly_spec(options['poly'])
            with stopwatch() as clock:
                trace = boyd_lawton_trace(P, n_list, cfg)
                limit = None
                if not options['no_limit'] and P.deg_y > 0:
                    try:
                        limit = mahler_bi(P, cfg)
                    except QuadratureNonconvergent as exc:
                        self.stdout.write(self.style.WARNING(f'torus measure unavailable: {exc}'))

        rows = []
        for n, value in trace:
            row = {'n': n, 'mahler': value}
            if limit is not None:
                row['distance'] = abs(value - limit)
            rows.append(row)

        if not options['json']:
            self.print_rows(rows)

        values = {'trace': rows, 'limit': limit}
        report = build_report('trace', label, '', cfg, values, {}, clock['seconds'])
        emit(self, report, options)

    def print_rows(self, rows):
        for row in rows:
            line = f"n={row['n']:<6} M={row['mahler']:.12f}"
            if 'distance' in row:
                line += f"  |M - M(P)|={row['distance']:.3e}"
            self.stdout.write(line)
