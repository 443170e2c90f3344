from django.conf import settings
from django.core.management.base import BaseCommand

from unimodular.cli import (
    METHODS, add_method_arguments, add_output_arguments, build_report,
    command_errors, compute_table, config_from_options, emit,
    select_rows, stopwatch, write_csv, write_json,
)
from unimodular.serializers import TableRowSerializer


class Command(BaseCommand):
    help = 'Reproduce the table of limit points LC(P) and LC(P^x) for registry rows'

    def add_arguments(self, parser):
        parser.add_argument(
            '--rows',
            type=str,
            default='',
            help="Comma separated row ids, e.g. 1,2,2' (default: all rows)"
        )
        parser.add_argument(
            '--method',
            choices=METHODS,
            default='mbm',
            help='Approximation method (default mbm)'
        )
        parser.add_argument(
            '--out',
            type=str,
            help='Write the table to this file'
        )
        parser.add_argument(
            '--format',
            choices=['csv', 'json'],
            default='csv',
            help='Output file format'
        )
        parser.add_argument(
            '--workers',
            type=int,
            default=None,
            help='Worker processes (default UNIMODAL_THREADS)'
        )
        add_method_arguments(parser)
        add_output_arguments(parser)

    def handle(self, *args, **options):
        method = options['method']
        row_ids = [r.strip() for r in options['rows'].split(',') if r.strip()]
        workers = options['workers'] or settings.UNIMODAL_THREADS

        with command_errors():
            cfg = config_from_options(options)
            rows = select_rows(row_ids)
            with stopwatch() as clock:
                results = compute_table(rows, method, cfg, workers)

        if not options['json']:
            self.print_rows(results)

        out = options['out']
        if out:
            if options['format'] == 'csv':
                count = write_csv(results, out)
            else:
                data = TableRowSerializer(results, many=True).data
                write_json(data, out)
                count = len(data)
            if not options['json']:
                self.stdout.write(self.style.SUCCESS(f'Wrote {count} row(s) to {out}'))

        failed = [r['row_id'] for r in results if r['errors']]
        values = {'rows': len(results), 'failed': failed}
        report = build_report(
            'table', ','.join(row_ids) or 'all', method, cfg, values,
            {'results': results}, clock['seconds'],
        )
        emit(self, report, options)

    def print_rows(self, results):
        for r in results:
            line = (f"{r['row_id']:>4} {r['kind']:<8} lc={_fmt(r['lc'])} (delta {_fmt(r['delta'])})  "
                    f"lc_inv={_fmt(r['lc_inv'])} (delta {_fmt(r['delta_inv'])})  {r['seconds']:.2f}s")
            if not r['errors']:
                self.stdout.write(line)
                continue
            self.stdout.write(self.style.WARNING(line))
            for error in r['errors']:
                self.stdout.write(self.style.WARNING(f'     {error}'))


def _fmt(value):
    return '-' if value is None else f'{value:.12f}'
