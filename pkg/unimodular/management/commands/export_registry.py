from django.core.management.base import BaseCommand

from unimodular.cli import build_report, render_json, save_report
from unimodular.config import MethodConfig
from unimodular.families import registry_json
from unimodular.serializers import RegistryRowSerializer


class Command(BaseCommand):
    help = 'Export the registry of tabulated limit points as JSON'

    def add_arguments(self, parser):
        parser.add_argument(
            '--out',
            type=str,
            help='Write to this file instead of stdout'
        )
        parser.add_argument(
            '--save',
            action='store_true',
            help='Persist the export as a RunReport'
        )

    def handle(self, *args, **options):
        rows = RegistryRowSerializer(registry_json(), many=True).data
        text = render_json(rows)
        out = options['out']
        if out:
            with open(out, 'w', encoding='utf-8') as fh:
                fh.write(text)
            self.stdout.write(self.style.SUCCESS(f'Exported {len(rows)} registry rows to {out}'))
        else:
            self.stdout.write(text)

        if options['save']:
            save_report(build_report(
                'export_registry', out or '-', '', MethodConfig(), {'rows': len(rows)},
            ))
