__doc__ = """
This module runs whole experiments. An experiment is described by a single
YAML document, which names a topology, the strategies to compare, the probing
schedule and the background traffic. Running it simulates every strategy and
writes the following artifacts:

* ``metrics.csv``, one row per strategy.
* ``summary.txt``, a human-readable comparison.
* ``<strategy>/trace.jsonl``, every simulation event.
* ``<strategy>/series_<switch>.csv``, the queue occupancy collected per switch.

Two experiments are bundled and can be referred to by name:
``probe-cost`` and ``queue-occupancy``.

Classes & methods
-------------------------------------------

Below are listed all classes and functions within :py:mod:`mmint.meta.experiments`.
"""


import os as _os
import yaml as _yaml
import logging as _logging
import dataclasses as _dataclasses
import importlib.resources as _resources
import mmint.core.exceptions as _ex
import mmint.core.gf2poly as _gf2
import mmint.core.mpolka as _mp
import mmint.core.netmodel as _nm
import mmint.core.simcore as _sim
import mmint.core.strategies as _st
import mmint.core.telemetry as _tel
from jsonschema import Draft202012Validator as _Draft202012Validator
from typing import Optional as _Optional


_logger = _logging.getLogger(__name__)


# The environment variable that provides the default output directory.
OUTPUT_DIR_ENV = 'MMINT_OUTPUT_DIR'

BUNDLED_CONFIGS = ('probe-cost', 'queue-occupancy')

# The topology name that refers to the bundled evaluation topology.
BUNDLED_TOPOLOGY = 'seven-switch'

DEFAULT_PERIOD_US = 10_000.0
DEFAULT_DURATION_US = 1_000_000.0


CONFIG_SCHEMA = {
    'type': 'object',
    'required': ['topology', 'strategies'],
    'additionalProperties': False,
    'properties': {
        'name': {'type': 'string'},
        'topology': {'type': 'string', 'minLength': 1},
        'strategies': {
            'type': 'array',
            'minItems': 1,
            'uniqueItems': True,
            'items': {'type': 'string', 'enum': list(_st.STRATEGIES)},
        },
        'probe_period_us': {'type': 'number', 'exclusiveMinimum': 0},
        'duration_us': {'type': 'number', 'exclusiveMinimum': 0},
        'seed': {'type': 'integer', 'minimum': 0},
        'single_generation': {'type': 'boolean'},
        'output_dir': {'type': 'string'},
        'flows': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['source', 'sink', 'rate_pps'],
                'additionalProperties': False,
                'properties': {
                    'source': {'type': 'string'},
                    'sink': {'type': 'string'},
                    'rate_pps': {'type': 'number', 'exclusiveMinimum': 0},
                    'size': {'type': 'integer', 'minimum': 64},
                    'tos': {'type': 'integer', 'minimum': 0, 'maximum': 255},
                    'count': {'type': 'integer', 'minimum': 1},
                },
            },
        },
        'sim': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'recirculation_us': {'type': 'number', 'minimum': 0},
                's2_carry_stack': {'type': 'boolean'},
                'check_invariants': {'type': 'boolean'},
                'trace_data': {'type': 'boolean'},
            },
        },
    },
}


@_dataclasses.dataclass(frozen=True)
class ExperimentConfig():
    '''
    A validated experiment.

    :param str name: The name of the experiment.
    :param TopologySpec topology: The topology.
    :param str topology_path: Where the topology was loaded from.
    :param tuple[str] strategies: The strategies to run.
    :param float probe_period_us: The time between probe generations.
    :param float duration_us: The simulated time.
    :param int seed: The seed of the traffic generators.
    :param bool single_generation: Whether probes are sent only once.
    :param tuple[Flow] flows: The background traffic.
    :param str output_dir: The output directory, if the document sets one.
    :param SimulationConfig sim: The switch model knobs.
    '''
    name: str
    topology: _nm.TopologySpec
    topology_path: str
    strategies: tuple
    probe_period_us: float = DEFAULT_PERIOD_US
    duration_us: float = DEFAULT_DURATION_US
    seed: int = 0
    single_generation: bool = False
    flows: tuple = ()
    output_dir: _Optional[str] = None
    sim: _sim.SimulationConfig = _sim.SimulationConfig()


@_dataclasses.dataclass(frozen=True)
class ExperimentResult():
    '''
    The outcome of :func:`run_experiment`.
    '''
    config: ExperimentConfig
    report: _st.MetricsReport
    traces: dict
    series: dict
    output_dir: _Optional[str]


def _read_source(source: str) -> tuple[str, str, str]:
    '''
    Returns the text, the name and the base directory of a config, \
    which is either a bundled config name or a file path.
    '''
    if source in BUNDLED_CONFIGS:
        text = _resources.files('mmint.data').joinpath(f"{source}.yaml").read_text(encoding='utf-8')
        return text, source, ''
    with open(source, 'r', encoding='utf-8') as f:
        text = f.read()
    name = _os.path.splitext(_os.path.basename(source))[0]
    return text, name, _os.path.dirname(_os.path.abspath(source))


def _load_topology(reference: str, base: str) -> tuple[_nm.TopologySpec, str]:
    if reference == BUNDLED_TOPOLOGY:
        return _nm.load_bundled_topology(), BUNDLED_TOPOLOGY
    path = reference if _os.path.isabs(reference) or not base else _os.path.join(base, reference)
    return _nm.load_topology_file(path), path


def load_config(source: str) -> ExperimentConfig:
    '''
    Loads and validates an experiment.

    :param str source: Either the name of a bundled experiment or the \
        path of a YAML file.

    :raises ConfigException: The experiment document is invalid.
    :raises TopologyException: The topology it references is invalid.
    :raises FileNotFoundError: A referenced file does not exist.
    '''
    text, name, base = _read_source(source)
    try:
        document = _yaml.safe_load(text)
    except _yaml.YAMLError as e:
        raise _ex.ConfigException([f"<document>: not valid YAML ({e})"])
    errors = [f"{'.'.join(map(str, e.absolute_path)) or '<document>'}: {e.message}"
        for e in sorted(_Draft202012Validator(CONFIG_SCHEMA).iter_errors(document),
            key=lambda e: list(map(str, e.absolute_path)))]
    if errors:
        raise _ex.ConfigException(errors)

    topology, topology_path = _load_topology(document['topology'], base)
    hosts = {h.name for h in topology.hosts}
    flows = []
    for i, f in enumerate(document.get('flows', [])):
        for end in ('source', 'sink'):
            if f[end] not in hosts:
                errors.append(f"flows.{i}.{end}: unknown host \"{f[end]}\"")
        if f.get('tos', 0) == _sim.PROBE_TOS:
            errors.append(f"flows.{i}.tos: TOS {_sim.PROBE_TOS} is reserved for probes")
        flows.append(_sim.Flow(f['source'], f['sink'], f['rate_pps'], f.get('size', 1000),
            f.get('tos', 0), f.get('count')))
    if errors:
        raise _ex.ConfigException(errors)

    return ExperimentConfig(
        name=document.get('name', name),
        topology=topology,
        topology_path=topology_path,
        strategies=tuple(sorted(document['strategies'])),
        probe_period_us=float(document.get('probe_period_us', DEFAULT_PERIOD_US)),
        duration_us=float(document.get('duration_us', DEFAULT_DURATION_US)),
        seed=document.get('seed', 0),
        single_generation=document.get('single_generation', False),
        flows=tuple(flows),
        output_dir=document.get('output_dir'),
        sim=_sim.SimulationConfig(**document.get('sim', {})),
    )


def validate(source: str) -> list[str]:
    '''
    Returns every problem found in an experiment, including those of \
    the topology it references. An empty list means the experiment is valid.

    :param str source: Either the name of a bundled experiment or the \
        path of a YAML file.
    '''
    try:
        config = load_config(source)
    except _ex.ConfigException as e:
        return list(e.errors)
    except _ex.TopologyException as e:
        return [f"topology: {err}" for err in e.errors]
    except FileNotFoundError as e:
        return [f"{e.filename}: no such file"]
    try:
        tree = _nm.to_tree(config.topology)
        _mp.encode_forward_tree(tree, _mp.assign_node_ids(config.topology))
    except (_ex.DisconnectedTopologyException, _ex.RouteOverflowException) as e:
        return [f"topology: {e}"]
    return []


def run_experiment(config: ExperimentConfig, output_dir: _Optional[str] = None,
        seed: _Optional[int] = None) -> ExperimentResult:
    '''
    Runs every strategy of an experiment and writes its artifacts.

    :param ExperimentConfig config: The experiment.
    :param str output_dir: Where artifacts are written. Defaults to the value \
        of the ``MMINT_OUTPUT_DIR`` environment variable, or else to the \
        directory set by the experiment. If neither is set, nothing is written.
    :param int seed: Overrides the seed of the experiment.
    '''
    if seed is not None:
        config = _dataclasses.replace(config, seed=seed)
    output_dir = output_dir or _os.environ.get(OUTPUT_DIR_ENV) or config.output_dir
    spec = config.topology
    tree = _nm.to_tree(spec)
    names = {spec.switch_id(n): n for n in spec.switches}
    period = None if config.single_generation else config.probe_period_us

    traces, series, rows = {}, {}, []
    for strategy in config.strategies:
        _logger.info("Experiment %s: running %s (seed %d).", config.name, strategy, config.seed)
        trace = _st.run_strategy(spec, strategy, config.flows, period, config.seed,
            config.duration_us, config.sim)
        traces[strategy] = trace
        series[strategy] = _tel.collector_ingest(trace.deliveries, names)[0]
        rows.append(_st.measure(spec, trace, tree))
    report = _st.MetricsReport(rows)

    if output_dir:
        _write_artifacts(config, report, traces, series, output_dir)
    return ExperimentResult(config, report, traces, series, output_dir)


def _write_artifacts(config: ExperimentConfig, report: _st.MetricsReport,
        traces: dict, series: dict, output_dir: str) -> None:
    _os.makedirs(output_dir, exist_ok=True)
    with open(_os.path.join(output_dir, 'metrics.csv'), 'w', encoding='utf-8', newline='\n') as f:
        f.write(report.to_csv())
    with open(_os.path.join(output_dir, 'summary.txt'), 'w', encoding='utf-8', newline='\n') as f:
        f.write(summarize(config, report))
    for strategy in sorted(traces):
        directory = _os.path.join(output_dir, strategy)
        _os.makedirs(directory, exist_ok=True)
        traces[strategy].write_jsonl(_os.path.join(directory, 'trace.jsonl'))
        for switch in series[strategy].switches():
            series[strategy].write_csv(_os.path.join(directory, f"series_{switch}.csv"), switch)
    _logger.info("Artifacts written to %s.", output_dir)


def summarize(config: ExperimentConfig, report: _st.MetricsReport) -> str:
    '''
    Returns the human-readable summary of an experiment.
    '''
    schedule = 'single generation' if config.single_generation \
        else f"every {config.probe_period_us:g} us"
    lines = [
        f"Experiment: {config.name}",
        f"Topology: {config.topology_path} ({len(config.topology.switches)} switches," +
            f" root {config.topology.root})",
        f"Probes: {schedule}; duration {config.duration_us:g} us; seed {config.seed};" +
            f" {len(config.flows)} background flow(s)",
        '',
    ]
    return '\n'.join(lines) + report.summary()


def describe_topology(source: str) -> str:
    '''
    Returns a summary of a topology: a table of its switches with their \
    node identifiers and forward transmission states, its leaves, and \
    the route identifier of its forward tree.

    :param str source: Either ``seven-switch`` or the path of a topology file.

    :raises TopologyException: The topology is invalid.
    :raises DisconnectedTopologyException: The topology is not connected.
    '''
    spec, path = _load_topology(source, '')
    tree = _nm.to_tree(spec)
    ids = _mp.assign_node_ids(spec)
    states = _mp.forward_states(tree, ids)
    route = _mp.encode_tree(tree, ids, states)

    lines = [
        f"Topology: {path} ({len(spec.switches)} switches, {len(spec.links)} links," +
            f" {len(spec.hosts)} hosts; root {spec.root})",
        '',
        f"{'switch':<8}{'id':>4}{'ports':>7}{'nq':>4}{'weights':>10}{'nodeID':>12}" +
            f"{'deg':>5}{'t_state':>10}{'memory':>8}  hosts",
    ]
    for name, s in spec.switches.items():
        hosts = ', '.join(f"{h.name} ({'/'.join(sorted(h.roles))})"
            for h in spec.hosts if h.switch == name)
        weights = ','.join(map(str, s.weights))
        lines.append(f"{name:<8}{spec.switch_id(name):>4}{s.ports:>7}{s.nq:>4}{weights:>10}" +
            f"{str(ids[name]):>12}{ids[name].degree:>5}{str(states[name]):>10}" +
            f"{_st.estimate_register_memory(s.ports, s.nq):>8}  {hosts}")

    values = [n.value for n in ids.values()]
    coprime = all(_gf2.gcd(a, b).value == 1
        for i, a in enumerate(values) for b in values[i + 1:])
    lines += [
        '',
        f"Leaves: {', '.join(tree.leaves)}",
        f"Tree edges: {', '.join(f'{a}-{b}' for a, b in tree.edges())}",
        f"NodeIDs pairwise coprime: {'yes' if coprime else 'no'}",
        f"Forward routeID ({route.value.value.bit_length()} bits): {route}",
    ]
    for w in spec.warnings:
        lines.append(f"Warning: {w}")
    return '\n'.join(lines) + '\n'
