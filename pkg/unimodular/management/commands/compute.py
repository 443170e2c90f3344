from django.core.management.base import BaseCommand

from unimodular.cli import (
    METHODS, add_method_arguments, add_output_arguments, add_poly_argument,
    build_report, command_errors, config_from_options, emit, parse_poly_spec,
    run_method, stopwatch,
)


class Command(BaseCommand):
    help = 'Compute the limit ratio LC(P) by the BM, MBM, CAP or exact-discriminant method'

    def add_arguments(self, parser):
        add_poly_argument(parser)
        parser.add_argument(
            '--method',
            choices=METHODS,
            default='mbm',
            help='Approximation method (default mbm)'
        )
        add_method_arguments(parser)
        add_output_arguments(parser)

    def handle(self, *args, **options):
        method = options['method']
        with command_errors():
            cfg = config_from_options(options)
            P, label = parse_poly_spec(options['poly'])
            with stopwatch() as clock:
                result = run_method(P, method, cfg)

        diagnostics = dict(result.diagnostics)
        if result.nonreciprocal:
            diagnostics['nonreciprocal'] = True
            self.stdout.write(
                self.style.WARNING('nonreciprocal: 2/g normalization does not give a nonunimodular ratio')
            )
        values = {'lc': result.value, 'raw_value': result.raw_value}
        report = build_report('compute', label, method, cfg, values, diagnostics, clock['seconds'])
        emit(self, report, options)
