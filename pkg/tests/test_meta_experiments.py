import os
import csv
import tempfile
import unittest
from unittest import mock
from mmint.meta.experiments import *
from mmint.core.exceptions import ConfigException, TopologyException


TOPOLOGY = """
root: A
switches: [{name: A}, {name: B}, {name: C}]
links: [{a: A, b: B}, {a: A, b: C}]
hosts:
  - {name: ha, switch: A, role: [generator, collector, traffic]}
  - {name: hb, switch: B, role: [collector, traffic]}
  - {name: hc, switch: C, role: [collector, traffic]}
"""

CHAIN = "root: S01\nswitches: [" + ", ".join(f"{{name: S{i:02d}}}" for i in range(1, 71)) + "]\n" + \
    "links: [" + ", ".join(f"{{a: S{i:02d}, b: S{i + 1:02d}}}" for i in range(1, 70)) + "]\n"

EXPERIMENT = """
topology: net.yaml
strategies: [S3, S1]
probe_period_us: 2000
duration_us: 10000
seed: 4
flows:
  - {source: ha, sink: hb, rate_pps: 300}
"""


class _TempDirTestCase(unittest.TestCase):

    def setUp(self):
        self.__tmp = tempfile.TemporaryDirectory()
        self.tmp = self.__tmp.name

    def tearDown(self):
        self.__tmp.cleanup()

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.tmp, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path


class TestLoadConfig(_TempDirTestCase):

    def test_load_bundled_config(self):
        config = load_config('probe-cost')
        self.assertEqual(config.name, 'probe-cost')
        self.assertEqual(config.strategies, ('S1', 'S2', 'S3'))
        self.assertTrue(config.single_generation)
        self.assertEqual(config.topology_path, BUNDLED_TOPOLOGY)
        self.assertEqual(len(config.topology.switches), 7)

    def test_load_bundled_traffic_config(self):
        config = load_config('queue-occupancy')
        self.assertEqual(config.strategies, ('S3',))
        self.assertEqual(len(config.flows), 24)
        self.assertEqual(config.probe_period_us, 10_000.0)

    def test_load_config_from_file(self):
        self.write('net.yaml', TOPOLOGY)
        config = load_config(self.write('exp.yaml', EXPERIMENT))
        self.assertEqual(config.name, 'exp')
        self.assertEqual(config.strategies, ('S1', 'S3'))
        self.assertEqual(config.topology_path, os.path.join(self.tmp, 'net.yaml'))
        self.assertEqual(config.flows[0].size, 1000)
        self.assertEqual(config.seed, 4)
        self.assertFalse(config.sim.s2_carry_stack)

    def test_load_config_on_schema_errors(self):
        path = self.write('exp.yaml', "topology: seven-switch\nstrategies: [S9]\nseed: -1\n")
        with self.assertRaises(ConfigException) as cm:
            load_config(path)
        self.assertTrue(any(e.startswith('strategies.0:') for e in cm.exception.errors))
        self.assertTrue(any(e.startswith('seed:') for e in cm.exception.errors))

    def test_load_config_on_unknown_host(self):
        text = "topology: seven-switch\nstrategies: [S3]\nflows: [{source: h1, sink: h9, rate_pps: 5}]\n"
        with self.assertRaises(ConfigException) as cm:
            load_config(self.write('exp.yaml', text))
        self.assertEqual(cm.exception.errors, ['flows.0.sink: unknown host "h9"'])

    def test_load_config_on_probe_tos(self):
        text = "topology: seven-switch\nstrategies: [S3]\nflows: [{source: h1, sink: h3, rate_pps: 5, tos: 55}]\n"
        with self.assertRaises(ConfigException):
            load_config(self.write('exp.yaml', text))

    def test_load_config_on_invalid_topology(self):
        self.write('net.yaml', "switches: []\n")
        with self.assertRaises(TopologyException):
            load_config(self.write('exp.yaml', EXPERIMENT))

    def test_load_config_on_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            load_config(os.path.join(self.tmp, 'missing.yaml'))


class TestValidate(_TempDirTestCase):

    def test_validate_bundled_configs(self):
        for name in BUNDLED_CONFIGS:
            self.assertEqual(validate(name), [])

    def test_validate_reports_topology_errors(self):
        self.write('net.yaml', "switches: [{name: A}]\nlinks: [{a: A, b: Z}]\n")
        problems = validate(self.write('exp.yaml', EXPERIMENT))
        self.assertEqual(problems, ['topology: links[0].b: unknown switch "Z"'])

    def test_validate_reports_disconnected_topology(self):
        self.write('net.yaml', "switches: [{name: A}, {name: B}]\nhosts: [{name: ha, switch: A, role: generator}]\n")
        problems = validate(self.write('exp.yaml', "topology: net.yaml\nstrategies: [S3]\n"))
        self.assertEqual(len(problems), 1)
        self.assertTrue(problems[0].startswith('topology: '))

    def test_validate_reports_route_overflow(self):
        self.write('chain.yaml', CHAIN)
        problems = validate(self.write('exp.yaml', "topology: chain.yaml\nstrategies: [S3]\n"))
        self.assertEqual(len(problems), 1)
        self.assertTrue(problems[0].startswith('topology: The route identifier requires'))

    def test_validate_on_missing_file(self):
        path = os.path.join(self.tmp, 'missing.yaml')
        self.assertEqual(validate(path), [f"{path}: no such file"])


class TestRunExperiment(_TempDirTestCase):

    def test_run_probe_cost(self):
        result = run_experiment(load_config('probe-cost'), output_dir=self.tmp)
        report = result.report
        self.assertEqual([r.probes_received for r in report.rows], [12, 12, 3])
        self.assertEqual([r.total_bytes for r in report.rows], [1888, 1844, 828])
        self.assertEqual([r.duplicate_traversals for r in report.rows], [8, 4, 0])
        for name in ('metrics.csv', 'summary.txt', os.path.join('S3', 'trace.jsonl'),
                os.path.join('S3', 'series_SW1.csv'), os.path.join('S1', 'series_SW6.csv')):
            self.assertTrue(os.path.isfile(os.path.join(self.tmp, name)), name)
        with open(os.path.join(self.tmp, 'summary.txt'), encoding='utf-8') as f:
            self.assertTrue(f.read().startswith('Experiment: probe-cost\n'))

    def test_run_writes_nothing_without_output_dir(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            result = run_experiment(load_config('probe-cost'))
        self.assertIsNone(result.output_dir)

    def test_run_output_dir_from_environment(self):
        with mock.patch.dict(os.environ, {OUTPUT_DIR_ENV: self.tmp}):
            result = run_experiment(load_config('probe-cost'))
        self.assertEqual(result.output_dir, self.tmp)
        self.assertTrue(os.path.isfile(os.path.join(self.tmp, 'metrics.csv')))

    def test_run_with_seed_override(self):
        self.write('net.yaml', TOPOLOGY)
        config = load_config(self.write('exp.yaml', EXPERIMENT))
        first = run_experiment(config, seed=9)
        second = run_experiment(config, seed=9)
        self.assertEqual(first.config.seed, 9)
        for s in ('S1', 'S3'):
            self.assertEqual(first.traces[s].to_jsonl(), second.traces[s].to_jsonl())
        self.assertEqual(first.report.row('S3').generations, 5)

    def test_run_queue_occupancy(self):
        result = run_experiment(load_config('queue-occupancy'), output_dir=self.tmp)
        series = result.series['S3']
        keys = [k for k in series.keys() if k[0] == 'SW1']
        self.assertEqual(keys, [('SW1', 1, 0), ('SW1', 1, 1), ('SW1', 2, 0), ('SW1', 2, 1)])
        for key in keys:
            samples = series.samples(key)
            self.assertGreaterEqual(len(samples), 50, key)
            self.assertTrue(any(s.enq_qdepth > 0 for s in samples), key)
        with open(os.path.join(self.tmp, 'S3', 'series_SW1.csv'), newline='') as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), sum(len(series.samples(k)) for k in keys))

    def test_bundled_experiments_check_invariants(self):
        for name in ('probe-cost', 'queue-occupancy'):
            self.assertTrue(load_config(name).sim.check_invariants, name)

    def test_run_twice_writes_identical_artifacts(self):
        config = load_config('probe-cost')
        first, second = os.path.join(self.tmp, 'a'), os.path.join(self.tmp, 'b')
        run_experiment(config, output_dir=first)
        run_experiment(config, output_dir=second)
        def listing(root):
            return sorted(os.path.relpath(os.path.join(d, f), root)
                for d, _, files in os.walk(root) for f in files)
        names = listing(first)
        self.assertIn('metrics.csv', names)
        self.assertIn(os.path.join('S3', 'trace.jsonl'), names)
        self.assertEqual(names, listing(second))
        for name in names:
            with open(os.path.join(first, name), 'rb') as a, open(os.path.join(second, name), 'rb') as b:
                self.assertEqual(a.read(), b.read(), name)


class TestDescribeTopology(unittest.TestCase):

    def test_describe_bundled_topology(self):
        text = describe_topology(BUNDLED_TOPOLOGY)
        self.assertIn('NodeIDs pairwise coprime: yes', text)
        self.assertIn('Leaves: SW3, SW4, SW7', text)
        self.assertIn('Tree edges: SW1-SW2, SW1-SW5, SW2-SW6, SW5-SW3, SW6-SW4, SW6-SW7', text)
        row = next(l for l in text.splitlines() if l.startswith('SW6 '))
        self.assertIn('11111', row)
        self.assertIn('1100', row)
        self.assertIn('Forward routeID (', text)
