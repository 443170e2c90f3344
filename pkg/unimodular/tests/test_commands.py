import csv
import json
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase, tag

from unimodular.cli import CSV_COLUMNS, parse_poly_spec
from unimodular.exceptions import BadSpec
from unimodular.families import FamilySpec, make
from unimodular.models import RunReport
from unimodular.polycore import invert


def run(*args, **kwargs):
    out = StringIO()
    call_command(*args, stdout=out, **kwargs)
    return out.getvalue()


class PolySpecTests(TestCase):
    def test_forms(self):
        P23 = make(FamilySpec('P', (2, 3)))
        self.assertEqual(parse_poly_spec('P(2,3)')[0], P23)
        self.assertEqual(parse_poly_spec('inv:P(2,3)'), (invert(P23), 'inv:P(2, 3)'))
        self.assertEqual(parse_poly_spec(json.dumps(P23.to_json()))[0], P23)
        self.assertEqual(parse_poly_spec(str(P23))[0], P23)

    def test_bad_json(self):
        with self.assertRaises(BadSpec):
            parse_poly_spec('{"rows": 1}')


class ComputeCommandTests(TestCase):
    def test_exact(self):
        out = run('compute', '--poly', 'inv:P(2,3)', '--method', 'exact')
        self.assertIn('lc: 0.2300534561', out)

    def test_mbm_default(self):
        out = run('compute', '--poly', 'P(1,3)')
        self.assertIn('lc: 0.333333333', out)

    def test_json_and_save(self):
        out = run('compute', '--poly', 'P(2,3)', '--method', 'bm', '--json', '--save')
        data = json.loads(out)
        self.assertEqual(data['command'], 'compute')
        self.assertEqual(data['method'], 'bm')
        self.assertAlmostEqual(data['values']['lc'], 0.1328095098966884, delta=5e-4)
        report = RunReport.objects.get()
        self.assertEqual(str(report.run_id), data['run_id'])
        self.assertEqual(report.config['quad_points'], 4096)

    def test_tolerance_flags(self):
        out = run('compute', '--poly', 'P(2,3)', '--method', 'bm', '--quad-points', '512', '--json')
        self.assertEqual(json.loads(out)['config']['quad_points'], 512)

    def test_nonreciprocal_warning(self):
        out = run('compute', '--poly', 'y-2*x', '--method', 'bm')
        self.assertIn('nonreciprocal', out)
        self.assertIn('lc: 1.0', out)
        self.assertIn('raw_value: 2.0', out)

    def test_trivial_fiber(self):
        out = run('compute', '--poly', 'y', '--method', 'bm')
        self.assertIn('lc: 0.0', out)
        self.assertNotIn('nonreciprocal', out)

    def test_bad_spec_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            run('compute', '--poly', 'x^^2')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_tolerance_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            run('compute', '--poly', 'P(2,3)', '--cap-r', '1.5')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_numerical_failure_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            run('compute', '--poly', 'y-2*x', '--method', 'exact')
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertIn('NonReciprocal', str(ctx.exception))


class RootsCommandTests(TestCase):
    def test_census(self):
        out = run('roots', '--poly', 'inv:P(2,3)', '--n', '60')
        self.assertIn('d: 242', out)
        self.assertIn('O: 28', out)
        self.assertIn('I: 28', out)

    def test_plot(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'roots.svg')
            out = run('roots', '--poly', 'inv:P(2,3)', '--n', '20', '--plot', path, '--sectors')
            self.assertIn('Plot saved', out)
            with open(path, encoding='utf-8') as fh:
                self.assertIn('<svg', fh.read())

    def test_single_linear_fiber(self):
        data = json.loads(run('roots', '--poly', 'x*y-2', '--n', '1', '--json'))
        self.assertEqual(data['values']['d'], 2)
        self.assertEqual(data['values']['O'], 2)

    def test_plot_higher_degree(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'roots.svg')
            out = run('roots', '--poly', 'inv:P(2,3)', '--n', '120', '--plot', path)
            self.assertTrue(os.path.exists(path))
        self.assertIn('d: 482', out)

    def test_salem_kind(self):
        out = run('roots', '--poly', '1+x-x^3-x^4-x^5-x^6-x^7+x^9+x^10', '--n', '1', '--json')
        self.assertEqual(json.loads(out)['values']['kind'], 'salem')

    def test_bad_exponent(self):
        with self.assertRaises(CommandError) as ctx:
            run('roots', '--poly', 'P(2,3)', '--n', '0')
        self.assertEqual(ctx.exception.returncode, 2)


class MahlerCommandTests(TestCase):
    def test_monomial(self):
        data = json.loads(run('mahler', '--poly', 'x*y', '--json'))
        self.assertAlmostEqual(data['values']['mahler'], 1.0, places=10)

    def test_jensen(self):
        data = json.loads(run('mahler', '--poly', 'P(2,3)', '--method', 'jensen', '--json'))
        self.assertAlmostEqual(data['values']['mahler'], 1.2554338662666087, delta=1e-4)

    def test_torus(self):
        data = json.loads(run('mahler', '--poly', 'P(2,3)', '--json'))
        self.assertAlmostEqual(data['values']['mahler'], 1.2554338662666087, delta=1e-4)

    def test_univariate(self):
        data = json.loads(run('mahler', '--poly', '1+x-x^3-x^4-x^5-x^6-x^7+x^9+x^10', '--json'))
        self.assertTrue(data['values']['univariate'])
        self.assertAlmostEqual(data['values']['mahler'], 1.17628081826, places=8)


class TraceCommandTests(TestCase):
    def test_trace(self):
        data = json.loads(run('trace', '--poly', 'P(2,1)', '--n', '10,20', '--json'))
        trace = data['values']['trace']
        self.assertEqual([row['n'] for row in trace], [10, 20])
        self.assertTrue(all('distance' in row for row in trace))

    def test_distance_shrinks(self):
        data = json.loads(run('trace', '--poly', 'P(2,1)', '--n', '20,40,80', '--json'))
        distances = {row['n']: row['distance'] for row in data['values']['trace']}
        self.assertLess(distances[80], distances[20])

    def test_text_output_and_save(self):
        out = run('trace', '--poly', 'P(2,1)', '--n', '10', '--save')
        self.assertIn('n=10', out)
        self.assertIn('|M - M(P)|=', out)
        self.assertIn('limit: 1.28', out)
        self.assertNotIn('trace: [', out)
        self.assertEqual(RunReport.objects.filter(command='trace').count(), 1)

    def test_bad_list(self):
        with self.assertRaises(CommandError) as ctx:
            run('trace', '--poly', 'P(2,1)', '--n', '10,x')
        self.assertEqual(ctx.exception.returncode, 2)


class TableCommandTests(TestCase):
    def test_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'table.csv')
            run('table', '--rows', "1,2',5", '--method', 'mbm', '--workers', '1', '--out', path)
            with open(path, newline='', encoding='utf-8') as fh:
                reader = csv.DictReader(fh)
                self.assertEqual(reader.fieldnames, CSV_COLUMNS)
                rows = list(reader)
        self.assertEqual([row['row_id'] for row in rows], ['1', "2'", '5'])
        for row in rows:
            self.assertLess(float(row['delta']), 1e-6)
            self.assertLess(float(row['delta_inv']), 1e-6)

    def test_json_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'table.json')
            run('table', '--rows', '1', '--workers', '1', '--out', path, '--format', 'json')
            with open(path, encoding='utf-8') as fh:
                [row] = json.load(fh)
        self.assertEqual(row['row_id'], '1')
        self.assertEqual(row['errors'], [])

    def test_trinomial_row(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'table.json')
            run('table', '--rows', '5', '--workers', '1', '--out', path, '--format', 'json')
            with open(path, encoding='utf-8') as fh:
                [row] = json.load(fh)
        self.assertEqual(row['lc'], 0.0)
        self.assertAlmostEqual(row['lc_inv'], 0.132322561324637, delta=1e-6)

    def test_unknown_row(self):
        with self.assertRaises(CommandError) as ctx:
            run('table', '--rows', '99', '--workers', '1')
        self.assertEqual(ctx.exception.returncode, 2)

    @tag('slow')
    def test_worker_pool(self):
        out = run('table', '--rows', '1,2,9,11', '--workers', '2', '--json')
        data = json.loads(out)
        self.assertEqual(data['values']['failed'], [])
        ids = [r['row_id'] for r in data['diagnostics']['results']]
        self.assertEqual(ids, ['1', '2', '9', '11'])


class ExportRegistryCommandTests(TestCase):
    def test_stdout(self):
        data = json.loads(run('export_registry'))
        self.assertEqual(len(data), 49)
        self.assertEqual(data[0]['label'], 'P(2, 3)')

    def test_file_and_save(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'registry.json')
            run('export_registry', '--out', path, '--save')
            with open(path, encoding='utf-8') as fh:
                self.assertEqual(len(json.load(fh)), 49)
        self.assertEqual(RunReport.objects.filter(command='export_registry').count(), 1)
