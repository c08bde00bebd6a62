__doc__ = """
This module plans the probe campaigns of the three telemetry strategies
and measures them:

* ``S1`` sends one INT probe per leaf and queue from the root to the
  leaf, and one back, i.e. ``lf x nq x 2`` probes.
* ``S2`` sends a single source-routed probe down the tree that is cloned
  once per queue, plus the ``lf x nq`` reverse INT probes of ``S1``.
* ``S3`` sends a single source-routed probe down the tree that collects
  the registers of every switch, which hold the state of all queues.

.. code-block:: python

   from mmint.core.netmodel import load_bundled_topology
   from mmint.core.strategies import run_strategy, measure

   spec = load_bundled_topology()
   trace = run_strategy(spec, 'S3', until_us=10_000)

   measure(spec, trace).probes_received # => 3

Classes & methods
-------------------------------------------

Below are listed all classes and functions within :py:mod:`mmint.core.strategies`.
"""


import io as _io
import csv as _csv
import logging as _logging
import dataclasses as _dataclasses
import mmint.core.exceptions as _ex
import mmint.core.telemetry as _tel
import mmint.core.simcore as _sim
from collections import Counter as _Counter
from mmint.core.mpolka import NodeId, RouteId, assign_node_ids as _assign_node_ids, \
    encode_forward_tree as _encode_forward_tree
from mmint.core.netmodel import TopologySpec, Tree, to_tree as _to_tree
from mmint.core.simcore import PacketKind, SimulationTrace
from typing import Optional as _Optional


_logger = _logging.getLogger(__name__)


STRATEGIES = ('S1', 'S2', 'S3')


# Reference values per strategy, measured on a BMv2 prototype and printed next to the computed
# ones: probe size, probes received, register memory, duplicates and total bytes.
REFERENCE_VALUES = {
    'S1': ('61', '12', '0', '12', '2300'),
    'S2': ('75', '12', '0', '8', '2174'),
    'S3': ('122-154', '3', '64-96', '0', '814'),
}


@_dataclasses.dataclass(frozen=True)
class ProbeLaunch():
    '''
    A probe that is injected once per generation.

    :param str origin: The switch the probe is injected at.
    :param PacketKind kind: ``PROBE_S1`` for INT probes, else the kind of \
        source-routed probe.
    :param tuple[str] path: The switches an INT probe visits.
    :param RouteId route: The route of a source-routed probe.
    :param int target_queue: The queue the probe is pinned to, if any.
    :param str direction: Either ``forward`` or ``reverse``.
    '''
    origin: str
    kind: PacketKind
    path: tuple = ()
    route: _Optional[RouteId] = None
    target_queue: _Optional[int] = None
    direction: str = 'forward'


@_dataclasses.dataclass(frozen=True)
class ProbePlan():
    '''
    The probes of one strategy along with their firing schedule.

    :param str strategy: The strategy.
    :param tuple[ProbeLaunch] launches: The probes of every generation.
    :param float period_us: The time between generations in microseconds, \
        or ``None`` for a single generation.
    '''
    strategy: str
    launches: tuple
    period_us: _Optional[float] = None

    def launches_in(self, direction: str) -> list[ProbeLaunch]:
        return [l for l in self.launches if l.direction == direction]


def _check_nq(nq: int) -> None:
    if isinstance(nq, bool) or not isinstance(nq, int):
        message = "Provided argument \"nq\" is not an integer."
        raise _ex.InvalidArgumentTypeException(message)
    if nq < 1:
        message = "Parameter \"nq\" must be a positive integer."
        raise _ex.InvalidArgumentValueException(message)


def _reverse_launches(tree: Tree, nq: int) -> list[ProbeLaunch]:
    return [ProbeLaunch(leaf, PacketKind.PROBE_S1, tuple(tree.path_from_root(leaf)[::-1]),
            target_queue=q, direction='reverse')
        for leaf in tree.leaves for q in range(nq)]


def plan_s1(tree: Tree, nq: int, period_us: _Optional[float] = None) -> ProbePlan:
    '''
    Plans one INT probe from the root to every leaf and one back, \
    for every queue.

    :param Tree tree: The probing tree.
    :param int nq: The number of queues per port.
    :param float period_us: The time between generations, or ``None`` \
        for a single generation.
    '''
    _check_nq(nq)
    forward = [ProbeLaunch(tree.root, PacketKind.PROBE_S1, tuple(tree.path_from_root(leaf)),
            target_queue=q)
        for leaf in tree.leaves for q in range(nq)]
    return ProbePlan('S1', tuple(forward + _reverse_launches(tree, nq)), period_us)


def plan_s2(tree: Tree, nq: int, node_ids: dict[str, NodeId],
        period_us: _Optional[float] = None) -> ProbePlan:
    '''
    Plans one source-routed probe down the tree, which switches clone once \
    per queue, plus one INT probe from every leaf back to the root per queue.

    :param Tree tree: The probing tree.
    :param int nq: The number of queues per port.
    :param dict[str, NodeId] node_ids: The node identifier of every switch.
    :param float period_us: The time between generations, or ``None`` \
        for a single generation.

    :raises RouteOverflowException: The tree does not fit in a route identifier.
    '''
    _check_nq(nq)
    route = _encode_forward_tree(tree, node_ids)
    forward = [ProbeLaunch(tree.root, PacketKind.PROBE_S2, route=route)]
    reverse = [l for l in _reverse_launches(tree, nq) if l.origin != tree.root]
    return ProbePlan('S2', tuple(forward + reverse), period_us)


def plan_s3(tree: Tree, nq: int, node_ids: dict[str, NodeId],
        period_us: _Optional[float] = None) -> ProbePlan:
    '''
    Plans a single source-routed probe down the tree that collects \
    the registers of every switch on its way.

    :param Tree tree: The probing tree.
    :param int nq: The number of queues per port.
    :param dict[str, NodeId] node_ids: The node identifier of every switch.
    :param float period_us: The time between generations, or ``None`` \
        for a single generation.

    :raises RouteOverflowException: The tree does not fit in a route identifier.

    :note: Parameter ``nq`` does not affect the plan, since registers cover \
        every queue.
    '''
    _check_nq(nq)
    route = _encode_forward_tree(tree, node_ids)
    return ProbePlan('S3', (ProbeLaunch(tree.root, PacketKind.PROBE_S3, route=route),), period_us)


def plan(strategy: str, tree: Tree, nq: int, node_ids: dict[str, NodeId],
        period_us: _Optional[float] = None) -> ProbePlan:
    '''
    Plans the probes of the provided strategy.

    :raises InvalidArgumentValueException: Parameter ``strategy`` is not \
        one of ``S1``, ``S2`` and ``S3``.
    '''
    if strategy == 'S1':
        return plan_s1(tree, nq, period_us)
    if strategy == 'S2':
        return plan_s2(tree, nq, node_ids, period_us)
    if strategy == 'S3':
        return plan_s3(tree, nq, node_ids, period_us)
    message = f"Unknown strategy \"{strategy}\"."
    raise _ex.InvalidArgumentValueException(message)


def run_strategy(spec: TopologySpec, strategy: str, flows: tuple = (),
        period_us: _Optional[float] = None, seed: int = 0, until_us: float = 1_000_000,
        config: _Optional[_sim.SimulationConfig] = None) -> SimulationTrace:
    '''
    Plans the probes of a strategy over the topology's tree and simulates them.

    :param TopologySpec spec: The topology.
    :param str strategy: One of ``S1``, ``S2`` and ``S3``.
    :param tuple[Flow] flows: The background traffic.
    :param float period_us: The time between generations, or ``None`` \
        for a single generation.
    :param int seed: The seed of the traffic generators.
    :param float until_us: The end of the simulation in microseconds.
    :param SimulationConfig config: The switch model knobs.
    '''
    tree = _to_tree(spec)
    nq = max(s.nq for s in spec.switches.values())
    probe_plan = plan(strategy, tree, nq, _assign_node_ids(spec), period_us)
    _logger.info("Running %s: %d launches per generation.", strategy, len(probe_plan.launches))
    return _sim.run(spec, _sim.Workload(tuple(flows), probe_plan), seed, until_us, config)


@_dataclasses.dataclass(frozen=True)
class DuplicateCount():
    '''
    The duplicate probe traversals of a strategy.

    :param int total: All duplicate traversals.
    :param int forward: Duplicate traversals from a switch towards its child.
    :param int reverse: Duplicate traversals from a switch towards its parent.
    :param dict[tuple[str, str], int] locations: Duplicates per directed link.
    '''
    total: int
    forward: int
    reverse: int
    locations: dict


def _transmissions(trace: SimulationTrace, generation: _Optional[int]):
    return [r for r in trace.probe_records('transmit')
        if generation is None or r.generation == generation]


def count_duplicates(trace: SimulationTrace, tree: Tree, nq: _Optional[int] = None,
        generation: _Optional[int] = None) -> dict[str, DuplicateCount]:
    '''
    Counts duplicate probe traversals per strategy. A traversal of a link \
    in some direction by a probe in queue ``q`` is a duplicate if another \
    probe in queue ``q`` already traversed the same link in the same \
    direction within the same generation.

    :param SimulationTrace trace: A completed trace.
    :param Tree tree: The probing tree, which tells the directions apart.
    :param int nq: If provided, only traversals of queues below ``nq`` count.
    :param int generation: If provided, only this generation is counted.
    '''
    seen: set = set()
    counts: dict[str, list] = {}
    for r in _transmissions(trace, generation):
        if nq is not None and r.queue >= nq:
            continue
        entry = counts.setdefault(r.strategy, [0, 0, _Counter()])
        key = (r.strategy, r.generation, r.switch, r.peer, r.queue)
        if key not in seen:
            seen.add(key)
            continue
        if tree.parent.get(r.peer) == r.switch:
            entry[0] += 1
        else:
            entry[1] += 1
        entry[2][(r.switch, r.peer)] += 1
    return {s: DuplicateCount(f + b, f, b, dict(loc)) for s, (f, b, loc) in counts.items()}


@_dataclasses.dataclass(frozen=True)
class ByteCount():
    total: int
    per_generation: dict


def account_bytes(trace: SimulationTrace, generation: _Optional[int] = None) -> dict[str, ByteCount]:
    '''
    Sums the wire size of every probe traversal of a switch-to-switch \
    link, per strategy and generation. Host links are not counted.

    :param SimulationTrace trace: A completed trace.
    :param int generation: If provided, only this generation is counted.
    '''
    sums: dict[str, _Counter] = {}
    for r in _transmissions(trace, generation):
        sums.setdefault(r.strategy, _Counter())[r.generation] += r.size
    return {s: ByteCount(sum(c.values()), dict(sorted(c.items()))) for s, c in sums.items()}


def estimate_register_memory(ports: int, nq: int) -> int:
    '''
    Returns the register memory in bytes a switch of ``ports`` ports with \
    ``nq`` queues each needs to hold one slot per queue.

    :param int ports: The number of ports.
    :param int nq: The number of queues per port.
    '''
    return _tel.SLOT_BYTES * ports * nq


def account_memory(spec: TopologySpec, strategy: str) -> dict[str, int]:
    '''
    Returns the register memory in bytes every switch needs for a strategy. \
    Only ``S3`` keeps state in registers.

    :param TopologySpec spec: The topology.
    :param str strategy: One of ``S1``, ``S2`` and ``S3``.
    '''
    return {name: estimate_register_memory(s.ports, s.nq) if strategy == 'S3' else 0
        for name, s in spec.switches.items()}


@_dataclasses.dataclass(frozen=True)
class StrategyMetrics():
    '''
    The measurements of one strategy. Counts and sizes refer to the first \
    probe generation, while ``mtu_exceeded`` and the staleness figures \
    cover the whole run.
    '''
    strategy: str
    size_min: int
    size_mean: float
    size_max: int
    probes_received: int
    register_memory_total: int
    register_memory_per_switch: dict
    duplicate_traversals: int
    duplicates_forward: int
    duplicates_reverse: int
    total_bytes: int
    coverage: float
    mtu_exceeded: int
    staleness_max_us: _Optional[float]
    staleness_mean_us: _Optional[float]
    generations: int
    duplicate_receipts: int


def measure(spec: TopologySpec, trace: SimulationTrace, tree: _Optional[Tree] = None) -> StrategyMetrics:
    '''
    Measures the run of a single strategy.

    :param TopologySpec spec: The topology that was simulated.
    :param SimulationTrace trace: The trace of the run.
    :param Tree tree: The probing tree. Defaults to the topology's tree.
    '''
    tree = tree or _to_tree(spec)
    strategy = trace.strategy
    first = [d for d in trace.deliveries if d.generation == 0]
    names = {spec.switch_id(n): n for n in spec.switches}
    _, receipts = _tel.collector_ingest(first, names)
    covered = set()
    for d in first:
        for s in _tel.parse_probe(d.data).slots:
            covered.add((names.get(s.switch_id), s.port, s.queue))
    universe = set(spec.slot_universe())

    sizes = [r.size for r in _transmissions(trace, 0)]
    dup = count_duplicates(trace, tree, generation=0).get(strategy, DuplicateCount(0, 0, 0, {}))
    memory = account_memory(spec, strategy)
    staleness = [r.staleness_us for r in trace.probe_records('dump') if r.staleness_us is not None]
    generations = {r.generation for r in trace.probe_records('inject')}
    return StrategyMetrics(
        strategy=strategy,
        size_min=min(sizes, default=0),
        size_mean=round(sum(sizes) / len(sizes), 2) if sizes else 0.0,
        size_max=max(sizes, default=0),
        probes_received=sum(1 for r in receipts if not r.duplicate),
        register_memory_total=sum(memory.values()),
        register_memory_per_switch=memory,
        duplicate_traversals=dup.total,
        duplicates_forward=dup.forward,
        duplicates_reverse=dup.reverse,
        total_bytes=account_bytes(trace, 0).get(strategy, ByteCount(0, {})).total,
        coverage=round(len(covered & universe) / len(universe), 4) if universe else 1.0,
        mtu_exceeded=sum(1 for r in trace.probe_records('transmit') if r.size > _sim.MTU_BYTES),
        staleness_max_us=round(max(staleness), 3) if staleness else None,
        staleness_mean_us=round(sum(staleness) / len(staleness), 3) if staleness else None,
        generations=len(generations),
        duplicate_receipts=sum(1 for r in receipts if r.duplicate),
    )


class MetricsReport():
    '''
    The side-by-side comparison of the strategies that were run. Ratios \
    against ``S1`` are only available when ``S1`` is among them.

    :param list[StrategyMetrics] rows: One row per strategy.
    '''

    BASE_COLUMNS = ('strategy', 'size_min', 'size_mean', 'size_max', 'probes_received',
        'register_memory_total', 'register_memory_per_switch', 'duplicate_traversals',
        'duplicates_forward', 'duplicates_reverse', 'total_bytes')
    RATIO_COLUMNS = ('probe_reduction_vs_s1', 'byte_ratio_vs_s1')
    EXTRA_COLUMNS = ('coverage', 'mtu_exceeded', 'staleness_max_us', 'staleness_mean_us',
        'generations', 'duplicate_receipts')

    def __init__(self, rows: list[StrategyMetrics]):
        '''
        The side-by-side comparison of the strategies that were run. Ratios \
        against ``S1`` are only available when ``S1`` is among them.

        :param list[StrategyMetrics] rows: One row per strategy.
        '''
        self.rows = sorted(rows, key=lambda r: r.strategy)

    def row(self, strategy: str) -> StrategyMetrics:
        for r in self.rows:
            if r.strategy == strategy:
                return r
        message = f"Strategy \"{strategy}\" was not run."
        raise _ex.InvalidArgumentValueException(message)

    @property
    def has_ratios(self) -> bool:
        return any(r.strategy == 'S1' for r in self.rows)

    def probe_reduction(self, strategy: str) -> _Optional[float]:
        '''
        Returns how many times fewer probes ``strategy`` needs than ``S1``.
        '''
        if not self.has_ratios:
            return None
        received = self.row(strategy).probes_received
        return round(self.row('S1').probes_received / received, 4) if received else None

    def byte_ratio(self, strategy: str) -> _Optional[float]:
        '''
        Returns how many times fewer bytes ``strategy`` needs than ``S1``.
        '''
        if not self.has_ratios:
            return None
        total = self.row(strategy).total_bytes
        return round(self.row('S1').total_bytes / total, 4) if total else None

    @property
    def columns(self) -> tuple[str, ...]:
        ratios = self.RATIO_COLUMNS if self.has_ratios else ()
        return self.BASE_COLUMNS + ratios + self.EXTRA_COLUMNS

    def records(self) -> list[dict]:
        '''
        Returns one dictionary per strategy, keyed by :attr:`columns`.
        '''
        records = []
        for r in self.rows:
            d = _dataclasses.asdict(r)
            d['register_memory_per_switch'] = ';'.join(
                f"{k}={v}" for k, v in sorted(r.register_memory_per_switch.items()))
            d['probe_reduction_vs_s1'] = self.probe_reduction(r.strategy)
            d['byte_ratio_vs_s1'] = self.byte_ratio(r.strategy)
            records.append({c: d[c] for c in self.columns})
        return records

    def to_csv(self) -> str:
        buffer = _io.StringIO()
        writer = _csv.DictWriter(buffer, fieldnames=self.columns, lineterminator='\n')
        writer.writeheader()
        for record in self.records():
            writer.writerow({k: '' if v is None else v for k, v in record.items()})
        return buffer.getvalue()

    def summary(self) -> str:
        '''
        Returns a human-readable comparison table, followed by the \
        published reference values.
        '''
        header = f"{'strategy':<9}{'size min/mean/max':>22}{'# probes':>10}{'mem':>8}" + \
            f"{'# dup (fw/rv)':>16}{'total bytes':>13}"
        if self.has_ratios:
            header += f"{'probes vs S1':>14}{'bytes vs S1':>13}"
        header += f"{'coverage':>10}{'> MTU':>7}"
        lines = [header, '-' * len(header)]
        for r in self.rows:
            size = f"{r.size_min}/{r.size_mean:g}/{r.size_max}"
            dup = f"{r.duplicate_traversals} ({r.duplicates_forward}/{r.duplicates_reverse})"
            line = f"{r.strategy:<9}{size:>22}{r.probes_received:>10}" + \
                f"{r.register_memory_total:>8}{dup:>16}{r.total_bytes:>13}"
            if self.has_ratios:
                line += f"{_fmt(self.probe_reduction(r.strategy)):>14}" + \
                    f"{_fmt(self.byte_ratio(r.strategy)):>13}"
            line += f"{r.coverage:>10.2%}{r.mtu_exceeded:>7}"
            lines.append(line)
        staleness = [r for r in self.rows if r.staleness_max_us is not None]
        if staleness:
            lines.append('')
            for r in staleness:
                lines.append(f"{r.strategy} register staleness: max {r.staleness_max_us:g} us," +
                    f" mean {r.staleness_mean_us:g} us over {r.generations} generation(s).")
        lines += ['', 'Reference values (size / # probes / mem / # dup / total bytes):']
        for s in (r.strategy for r in self.rows):
            lines.append(f"  {s}: " + ' / '.join(REFERENCE_VALUES[s]))
        lines.append('Duplicates above count repeated (link, direction, queue) traversals' +
            ' within a generation; the reference totals follow a different convention.')
        return '\n'.join(lines) + '\n'


def _fmt(v: _Optional[float]) -> str:
    return '-' if v is None else f"{v:.2f}x"
