__doc__ = """
This module contains a deterministic discrete-event simulation of a
network of switches with multi-queue egress ports. Time is measured in
microseconds and driven by a :class:`simpy.Environment`.

Every switch forwards data packets along the probing tree towards the
switch their destination host is attached to, and handles probes the way
a programmable pipeline would:

* A packet picks one of the queues of its egress port, or is dropped if
  that queue is full. Ports serve their queues by weighted round robin.
* The egress pipeline runs when a packet leaves its queue. Data packets
  overwrite the register of that queue with a :class:`TelemetrySlot`.
  Probes never write registers. Instead they append the entry of the
  queue they traversed or, for register-collecting probes, the whole
  register file of the switch.

.. code-block:: python

   from mmint.core.netmodel import load_bundled_topology, to_tree
   from mmint.core.mpolka import assign_node_ids
   from mmint.core.strategies import plan_s3
   from mmint.core.simcore import Workload, run

   spec = load_bundled_topology()
   plan = plan_s3(to_tree(spec), 2, assign_node_ids(spec))
   trace = run(spec, Workload(plan=plan), seed=1, until_us=5_000)

   len(trace.deliveries) # => 3

Classes & methods
-------------------------------------------

Below are listed all classes and functions within :py:mod:`mmint.core.simcore`.
"""


import json as _json
import enum as _enum
import simpy as _simpy
import numpy as _np
import logging as _logging
import dataclasses as _dataclasses
import mmint.core.exceptions as _ex
import mmint.core.telemetry as _tel
from collections import deque as _deque
from collections import Counter as _Counter
from mmint.core.gf2poly import Poly as _Poly
from mmint.core.mpolka import RouteId as _RouteId, assign_node_ids as _assign_node_ids, \
    compute_t_state as _compute_t_state, active_ports as _active_ports
from mmint.core.netmodel import TopologySpec, LinkSpec, SwitchSpec, to_tree as _to_tree
from mmint.core.telemetry import TelemetrySlot
from typing import Optional as _Optional
from typing import TYPE_CHECKING as _TYPE_CHECKING

if _TYPE_CHECKING:
    from mmint.core.strategies import ProbePlan, ProbeLaunch


_logger = _logging.getLogger(__name__)


# The TOS value that marks a packet as a telemetry probe.
PROBE_TOS = 55

MTU_BYTES = 1500

_U16 = 0xFFFF
_U32 = 0xFFFFFFFF


class PacketKind(_enum.Enum):
    '''
    The kinds of packets the simulation carries.
    '''
    DATA = 'DATA'
    PROBE_S1 = 'PROBE_S1'
    PROBE_S2 = 'PROBE_S2'
    PROBE_S3 = 'PROBE_S3'


@_dataclasses.dataclass(eq=False)
class Packet():
    '''
    A packet in flight.

    :param PacketKind kind: The kind of the packet.
    :param int tos: The TOS byte.
    :param float created_us: The creation time in microseconds.
    :param SrProbeHeader | IntProbeHeader header: The probe header, if any.
    :param int payload_size: The wire size of a data packet in bytes.
    :param int flow_id: The flow a data packet belongs to.
    :param str dst_host: The destination host of a data packet.
    :param str strategy: The probing strategy a probe belongs to.
    :param int generation: The probe generation a probe belongs to.
    :param tuple[str] path: The switches an INT probe visits, in order.
    :param int queue_pin: The queue a probe must traverse, if any.
    :param bool collect: Whether this copy collects the register dump at egress.
    '''
    kind: PacketKind
    tos: int
    created_us: float
    header: object = None
    payload_size: int = 0
    flow_id: _Optional[int] = None
    dst_host: _Optional[str] = None
    strategy: _Optional[str] = None
    generation: _Optional[int] = None
    path: tuple = ()
    queue_pin: _Optional[int] = None
    collect: bool = False
    switch: _Optional[str] = None
    port: _Optional[int] = None
    queue: _Optional[int] = None
    enq_time: float = 0.0
    enq_qdepth: int = 0

    @property
    def size(self) -> int:
        '''
        The wire size of the packet in bytes.
        '''
        return self.header.wire_size if self.header is not None else self.payload_size

    @property
    def is_probe(self) -> bool:
        return self.kind is not PacketKind.DATA

    @property
    def probe_id(self) -> _Optional[int]:
        return self.header.probe_id if self.header is not None else None

    def copy(self, **changes) -> 'Packet':
        '''
        Returns a copy of this packet with the provided fields changed.
        '''
        return _dataclasses.replace(self, **changes)


class QueueState():
    '''
    A FIFO egress queue of bounded capacity.

    :param int capacity: The capacity in packets.
    :param int weight: The scheduling weight.

    :note: Counter ``enqueued`` counts every packet offered to the queue, \
        so that ``enqueued = dequeued + dropped + depth`` at all times.
    '''

    def __init__(self, capacity: int, weight: int):
        '''
        A FIFO egress queue of bounded capacity.

        :param int capacity: The capacity in packets.
        :param int weight: The scheduling weight.
        '''
        self.capacity = capacity
        self.weight = weight
        self.packets: _deque = _deque()
        self.enqueued = 0
        self.dequeued = 0
        self.dropped = 0

    @property
    def depth(self) -> int:
        return len(self.packets)

    def offer(self, packet: Packet) -> bool:
        '''
        Appends a packet to the queue unless the queue is full.

        :return: ``True`` if the packet was accepted, ``False`` if it was dropped.
        '''
        self.enqueued += 1
        if len(self.packets) >= self.capacity:
            self.dropped += 1
            return False
        self.packets.append(packet)
        return True

    def pop(self) -> Packet:
        self.dequeued += 1
        return self.packets.popleft()

    def is_conserved(self) -> bool:
        return self.enqueued == self.dequeued + self.dropped + self.depth \
            and self.depth <= self.capacity


class RegisterFile():
    '''
    The telemetry registers of a switch, one :class:`TelemetrySlot` per \
    ``(port, queue)`` of its network ports.

    :param int switch_id: The identifier of the switch.
    :param int ports: The number of network ports.
    :param int nq: The number of queues per port.
    '''

    def __init__(self, switch_id: int, ports: int, nq: int):
        '''
        The telemetry registers of a switch, one :class:`TelemetrySlot` per \
        ``(port, queue)`` of its network ports.

        :param int switch_id: The identifier of the switch.
        :param int ports: The number of network ports.
        :param int nq: The number of queues per port.
        '''
        self.switch_id = switch_id
        self.ports = ports
        self.nq = nq
        self.__slots = {(p, q): TelemetrySlot(switch_id, p, q)
            for p in range(1, ports + 1) for q in range(nq)}
        self.__updated: dict[tuple[int, int], float] = {}

    @property
    def memory_bytes(self) -> int:
        return _tel.SLOT_BYTES * self.ports * self.nq

    def slot(self, port: int, queue: int) -> TelemetrySlot:
        return self.__slots[(port, queue)]

    def last_update(self, port: int, queue: int) -> _Optional[float]:
        '''
        Returns the time of the last write to a slot, or ``None`` if it \
        has never been written.
        '''
        return self.__updated.get((port, queue))

    def write(self, slot: TelemetrySlot, now: float) -> None:
        self.__slots[(slot.port, slot.queue)] = slot
        self.__updated[(slot.port, slot.queue)] = now

    def staleness(self, now: float) -> _Optional[float]:
        '''
        Returns the age of the oldest written slot at time ``now``, or \
        ``None`` if no slot has been written yet.
        '''
        if not self.__updated:
            return None
        return now - min(self.__updated.values())


@_dataclasses.dataclass(frozen=True)
class Flow():
    '''
    A Poisson stream of data packets between two hosts.

    :param str source: The sending host.
    :param str sink: The receiving host.
    :param float rate_pps: The mean rate in packets per second.
    :param int size: The packet size in bytes. Defaults to ``1000``.
    :param int tos: The TOS byte, which selects the queue. Defaults to ``0``.
    :param int count: The number of packets to send. Defaults to ``None``, \
        i.e. unlimited.
    '''
    source: str
    sink: str
    rate_pps: float
    size: int = 1000
    tos: int = 0
    count: _Optional[int] = None


@_dataclasses.dataclass(frozen=True)
class Workload():
    '''
    Everything that is injected into a simulation: data flows plus \
    an optional probe plan.
    '''
    flows: tuple = ()
    plan: _Optional['ProbePlan'] = None


@_dataclasses.dataclass(frozen=True)
class SimulationConfig():
    '''
    Knobs of the switch model.

    :param float recirculation_us: The delay a recirculated probe clone \
        incurs before it is enqueued. Defaults to ``0``.
    :param bool s2_carry_stack: Whether the upstream stack of a queue-cloned \
        probe continues on its first ``(port, queue 0)`` copy. Defaults to \
        ``False``, in which case every copy restarts with an empty stack.
    :param bool check_invariants: Whether to verify packet conservation \
        after every queue operation. Defaults to ``False``.
    :param bool trace_data: Whether data packet events are traced. \
        Defaults to ``True``.
    '''
    recirculation_us: float = 0.0
    s2_carry_stack: bool = False
    check_invariants: bool = False
    trace_data: bool = True


@_dataclasses.dataclass(frozen=True)
class TraceRecord():
    '''
    A single simulation event. Action is one of ``inject``, ``enqueue``, \
    ``drop``, ``dequeue``, ``transmit``, ``deliver`` and ``dump``.
    '''
    time_us: float
    switch: str
    action: str
    kind: str
    size: int
    port: _Optional[int] = None
    queue: _Optional[int] = None
    peer: _Optional[str] = None
    probe_id: _Optional[int] = None
    target_queue: _Optional[int] = None
    generation: _Optional[int] = None
    strategy: _Optional[str] = None
    flow_id: _Optional[int] = None
    staleness_us: _Optional[float] = None

    def to_dict(self) -> dict:
        '''
        Returns the record as a dictionary, leaving out unset fields.
        '''
        return {k: v for k, v in _dataclasses.asdict(self).items() if v is not None}


class SimulationTrace():
    '''
    The outcome of a simulation run: every traced event in time order, \
    the probes delivered to collectors, and the final counters.
    '''

    def __init__(self, records: list, deliveries: list, counters: dict,
            queue_counters: dict, strategy: _Optional[str] = None):
        '''
        The outcome of a simulation run: every traced event in time order, \
        the probes delivered to collectors, and the final counters.
        '''
        self.records: list[TraceRecord] = records
        self.deliveries: list[_tel.Delivery] = deliveries
        self.counters: dict[str, int] = counters
        self.queue_counters: dict[tuple[str, int, int], dict[str, int]] = queue_counters
        self.strategy = strategy

    def probe_records(self, action: _Optional[str] = None) -> list[TraceRecord]:
        '''
        Returns every probe record, optionally only those of one action.
        '''
        return [r for r in self.records if r.kind != PacketKind.DATA.value
            and (action is None or r.action == action)]

    def to_jsonl(self) -> str:
        '''
        Returns the records as line-delimited JSON.
        '''
        return ''.join(_json.dumps(r.to_dict(), sort_keys=True) + '\n' for r in self.records)

    def write_jsonl(self, path: str) -> None:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.to_jsonl())


def _u16(v) -> int:
    return min(int(v), _U16)


def _u32(v) -> int:
    return min(int(v), _U32)


class EgressPort():
    '''
    A network port of a switch with its queues, its weighted round robin \
    scheduler and its attached link.
    '''

    def __init__(self, switch: 'Switch', port: int, link: LinkSpec):
        '''
        A network port of a switch with its queues, its weighted round robin \
        scheduler and its attached link.
        '''
        self.switch = switch
        self.port = port
        self.link = link
        self.peer, self.peer_port = link.other_end(switch.name)
        spec = switch.spec
        self.queues = [QueueState(spec.queue_capacity, w) for w in spec.weights]
        self.__cursor = 0
        self.__credit = self.queues[0].weight
        env = switch.sim.env
        self.backlog = _simpy.Container(env)
        env.process(self._serve())

    def select_queue(self) -> int:
        '''
        Returns the queue weighted round robin serves next. Each queue, \
        in turn, is granted as many consecutive services as its weight \
        while it has packets.

        :raises InvalidArgumentValueException: Every queue is empty.
        '''
        if not any(q.depth for q in self.queues):
            message = f"Port {self.port} of switch \"{self.switch.name}\" has no packets."
            raise _ex.InvalidArgumentValueException(message)
        while True:
            if self.__credit > 0 and self.queues[self.__cursor].depth:
                self.__credit -= 1
                return self.__cursor
            self.__cursor = (self.__cursor + 1) % len(self.queues)
            self.__credit = self.queues[self.__cursor].weight

    def dequeue_service(self) -> Packet:
        '''
        Removes the next packet from the queue selected by the scheduler \
        and runs the egress pipeline on it.
        '''
        index = self.select_queue()
        queue = self.queues[index]
        packet = queue.pop()
        self.switch.check_queue(self.port, index)
        self.switch.trace('dequeue', packet, port=self.port, queue=index)
        return self.switch.egress(packet, self.port, index)

    def _serve(self):
        env = self.switch.sim.env
        while True:
            yield self.backlog.get(1)
            packet = self.dequeue_service()
            yield env.timeout(packet.size * 8 / self.link.bandwidth_bps * 1e6)
            self.switch.trace('transmit', packet, port=self.port,
                queue=packet.queue, peer=self.peer)
            env.process(self._propagate(packet))

    def _propagate(self, packet: Packet):
        yield self.switch.sim.env.timeout(self.link.delay_us)
        self.switch.sim.switches[self.peer].receive(packet, self.peer_port)


class Switch():
    '''
    A switch: its egress ports, its telemetry registers and the \
    pipeline that processes every packet it receives.
    '''

    def __init__(self, sim: 'Simulation', spec: SwitchSpec):
        '''
        A switch: its egress ports, its telemetry registers and the \
        pipeline that processes every packet it receives.
        '''
        self.sim = sim
        self.spec = spec
        self.name = spec.name
        self.switch_id = sim.topology.switch_id(spec.name)
        self.node_id = sim.node_ids[spec.name]
        self.registers = RegisterFile(self.switch_id, spec.ports, spec.nq)
        self.ports: dict[int, EgressPort] = {}
        for p in range(1, spec.ports + 1):
            link = sim.topology.link_at(spec.name, p)
            if link is not None:
                self.ports[p] = EgressPort(self, p, link)
        # Output port of every destination host, 0 for local hosts.
        self.routes: dict[str, int] = {}

    def trace(self, action: str, packet: Packet, **fields) -> None:
        self.sim.trace(self.name, action, packet, **fields)

    def check_queue(self, port: int, queue: int) -> None:
        if self.sim.config.check_invariants and not self.ports[port].queues[queue].is_conserved():
            raise _ex.SimulationInvariantException(
                f"{self.name} port {port} queue {queue}", self.sim.env.now)

    def receive(self, packet: Packet, in_port: int) -> None:
        '''
        Processes a packet arriving on ``in_port``, port ``0`` being the \
        local host.
        '''
        packet.switch = self.name
        if packet.tos != PROBE_TOS:
            out = self.routes[packet.dst_host]
            if out == 0:
                self.sim.deliver_data(self.name, packet)
            else:
                self.classify_and_enqueue(packet, out)
            return
        emitted = self.probe_pipeline(packet)
        for i, (port, copy) in enumerate(emitted):
            if i > 0 and self.sim.config.recirculation_us > 0:
                self.sim.env.process(self._recirculate(port, copy, i * self.sim.config.recirculation_us))
            else:
                self._emit(port, copy)

    def _recirculate(self, port: _Optional[int], packet: Packet, delay_us: float):
        # Recirculation passes are serial: copy i waits for i passes.
        yield self.sim.env.timeout(delay_us)
        self._emit(port, packet)

    def _emit(self, port: _Optional[int], packet: Packet) -> None:
        if port is None:
            self.sim.deliver_probe(self.name, packet)
        else:
            self.classify_and_enqueue(packet, port)

    def classify_and_enqueue(self, packet: Packet, out_port: int) -> int:
        '''
        Hands a packet to the traffic manager, which appends it to one of \
        the queues of ``out_port``. Data packets go to queue ``TOS mod nq``. \
        Packets carrying the probe TOS go to the queue they are pinned \
        to, or else to queue ``0``. \
        A packet that finds its queue full is dropped.

        :param Packet packet: The packet.
        :param int out_port: The egress port.

        :return: The index of the selected queue.
        '''
        nq = self.spec.nq
        probe = packet.tos == PROBE_TOS
        if not probe:
            index = packet.tos % nq
        elif packet.queue_pin is not None and packet.queue_pin < nq:
            index = packet.queue_pin
        else:
            index = 0
        egress = self.ports[out_port]
        queue = egress.queues[index]
        depth = queue.depth
        if queue.offer(packet):
            packet.port, packet.queue = out_port, index
            packet.enq_time, packet.enq_qdepth = self.sim.env.now, depth
            self.trace('enqueue', packet, port=out_port, queue=index)
            egress.backlog.put(1)
        else:
            self.sim.count('probes_dropped_queue' if probe else 'data_dropped')
            self.trace('drop', packet, port=out_port, queue=index)
        self.check_queue(out_port, index)
        return index

    def register_write_on_dequeue(self, port: int, queue: int, packet: Packet,
            now: float) -> TelemetrySlot:
        '''
        Overwrites the register of ``(port, queue)`` with the snapshot \
        left by a departing data packet. Probes leave the register untouched.

        :return: The slot held by the register afterwards.
        '''
        if packet.is_probe:
            return self.registers.slot(port, queue)
        slot = self._own_slot(port, queue, packet, now)
        self.registers.write(slot, now)
        return slot

    def _own_slot(self, port: int, queue: int, packet: Packet, now: float) -> TelemetrySlot:
        return TelemetrySlot(self.switch_id, port, queue,
            enq_qdepth=_u16(packet.enq_qdepth),
            deq_qdepth=_u16(self.ports[port].queues[queue].depth),
            deq_timedelta=_u32(now - packet.enq_time),
            enq_timestamp=int(packet.enq_time) & _U32)

    def egress(self, packet: Packet, port: int, queue: int) -> Packet:
        '''
        Runs the egress pipeline on a packet that has just left its queue.
        '''
        now = self.sim.env.now
        if packet.kind is PacketKind.DATA:
            self.register_write_on_dequeue(port, queue, packet, now)
        elif packet.kind in (PacketKind.PROBE_S1, PacketKind.PROBE_S2):
            packet.header = packet.header.with_slots([self._own_slot(port, queue, packet, now)])
        elif packet.collect:
            packet.header = self._dump_into(packet, port, queue)
        if packet.is_probe and packet.size > MTU_BYTES:
            self.sim.count('mtu_exceeded')
        return packet

    def _dump_into(self, packet: Packet, port: _Optional[int], queue: _Optional[int]):
        now = self.sim.env.now
        staleness = self.registers.staleness(now)
        header = packet.header.with_slots(_tel.dump_registers(self.registers))
        self.sim.trace(self.name, 'dump', packet, port=port, queue=queue,
            staleness_us=None if staleness is None else round(staleness, 3),
            size=header.wire_size)
        return header

    def probe_pipeline(self, probe: Packet) -> list[tuple[_Optional[int], Packet]]:
        '''
        Decides what becomes of a probe arriving at this switch.

        * An INT probe moves on to the next switch of its path, or \
          terminates at the last one.
        * A source-routed probe is cloned to every active port of the \
          switch's transmission state. A register-collecting probe keeps \
          its stack on the first active port, where it will also collect \
          the register dump of this switch, while the remaining copies \
          start empty. A queue-cloned probe that is not yet pinned yields \
          one copy per active port and queue, each pinned to its queue.
        * A source-routed probe with no active ports terminates. A \
          terminating register-collecting probe collects the register dump \
          of this switch on the spot.

        :param Packet probe: The arriving probe.

        :return: A list of ``(port, packet)`` pairs, where port ``None`` \
            stands for the local collector.
        '''
        if probe.kind is PacketKind.PROBE_S1:
            i = probe.path.index(self.name)
            if i == len(probe.path) - 1:
                return [(None, probe)]
            return [(self.sim.topology.port_towards(self.name, probe.path[i + 1]), probe)]

        header = probe.header
        state = _compute_t_state(_RouteId(_Poly(header.route_id)), self.node_id)
        ports = _active_ports(state)
        _logger.debug("%s: probe %d t_state %s, active ports %s.",
            self.name, header.probe_id, state, ports)

        if probe.kind is PacketKind.PROBE_S3:
            if not ports:
                probe.header = self._dump_into(probe, None, None)
                return [(None, probe)]
            empty = _dataclasses.replace(header, slots=())
            return [(ports[0], probe.copy(collect=True))] + \
                [(p, probe.copy(header=empty, collect=False)) for p in ports[1:]]

        if header.target_queue == _tel.UNPINNED:
            queues = list(range(self.spec.nq))
        else:
            queues = [header.target_queue]
        if not ports:
            return [(None, self._pin(probe, q, keep=True)) for q in queues]
        carry = self.sim.config.s2_carry_stack
        return [(p, self._pin(probe, q, keep=carry and j == 0 and q == 0))
            for j, p in enumerate(ports) for q in queues]

    @staticmethod
    def _pin(probe: Packet, queue: int, keep: bool) -> Packet:
        header = _dataclasses.replace(probe.header, target_queue=queue,
            slots=probe.header.slots if keep else ())
        return probe.copy(header=header, queue_pin=queue)


class Simulation():
    '''
    A simulation of a topology under a workload.

    :param TopologySpec spec: The topology.
    :param Workload workload: The flows and the probe plan.
    :param int seed: The seed of the traffic generators. Defaults to ``0``.
    :param SimulationConfig config: The switch model knobs.

    :raises InvalidArgumentValueException: A flow references an unknown \
        host, uses the probe TOS, or has a non-positive rate.
    '''

    def __init__(self, spec: TopologySpec, workload: Workload, seed: int = 0,
            config: _Optional[SimulationConfig] = None):
        '''
        A simulation of a topology under a workload.

        :param TopologySpec spec: The topology.
        :param Workload workload: The flows and the probe plan.
        :param int seed: The seed of the traffic generators. Defaults to ``0``.
        :param SimulationConfig config: The switch model knobs.

        :raises InvalidArgumentValueException: A flow references an unknown \
            host, uses the probe TOS, or has a non-positive rate.
        '''
        self.topology = spec
        self.workload = workload
        self.seed = seed
        self.config = config or SimulationConfig()
        self.env = _simpy.Environment()
        self.tree = _to_tree(spec)
        self.node_ids = _assign_node_ids(spec)
        self.__records: list[TraceRecord] = []
        self.__deliveries: list[_tel.Delivery] = []
        self.__counters: _Counter = _Counter()
        self.switches = {name: Switch(self, s) for name, s in spec.switches.items()}
        self.__hosts = {h.name: h for h in spec.hosts}
        self._install_routes()
        for i, flow in enumerate(workload.flows):
            self._check_flow(i, flow)
            self.env.process(self._flow_source(i, flow))
        if workload.plan is not None:
            self.env.process(self._probe_source(workload.plan))

    def _check_flow(self, i: int, flow: Flow) -> None:
        for name in (flow.source, flow.sink):
            if name not in self.__hosts:
                message = f"Flow {i} references unknown host \"{name}\"."
                raise _ex.InvalidArgumentValueException(message)
        if flow.tos == PROBE_TOS:
            message = f"Flow {i} uses TOS {PROBE_TOS}, which is reserved for probes."
            raise _ex.InvalidArgumentValueException(message)
        if flow.rate_pps <= 0:
            message = f"Flow {i} must have a positive rate."
            raise _ex.InvalidArgumentValueException(message)

    def _install_routes(self) -> None:
        for host in self.topology.hosts:
            for name, switch in self.switches.items():
                if name == host.switch:
                    switch.routes[host.name] = 0
                else:
                    path = self.tree.path(name, host.switch)
                    switch.routes[host.name] = self.topology.port_towards(name, path[1])

    def count(self, counter: str, n: int = 1) -> None:
        self.__counters[counter] += n

    def trace(self, switch: str, action: str, packet: Packet, **fields) -> None:
        if not packet.is_probe and not self.config.trace_data:
            return
        header = packet.header
        values = dict(time_us=round(self.env.now, 3), switch=switch, action=action,
            kind=packet.kind.value, size=packet.size, probe_id=packet.probe_id,
            target_queue=getattr(header, 'target_queue', None),
            generation=packet.generation, strategy=packet.strategy, flow_id=packet.flow_id)
        values.update(fields)
        self.__records.append(TraceRecord(**values))

    def deliver_data(self, switch: str, packet: Packet) -> None:
        self.count('data_delivered')
        self.trace(switch, 'deliver', packet, port=0)

    def deliver_probe(self, switch: str, packet: Packet) -> None:
        '''
        Hands a terminating probe to the collector attached to ``switch``, \
        or drops it if there is none.
        '''
        if not self.topology.has_collector(switch):
            _logger.warning("Probe %d terminated at %s, which has no collector.",
                packet.probe_id, switch)
            self.count('probe_drop_no_collector')
            self.trace(switch, 'drop', packet, port=0)
            return
        self.count('probes_delivered')
        self.trace(switch, 'deliver', packet, port=0)
        self.__deliveries.append(_tel.Delivery(round(self.env.now, 3), switch,
            _tel.serialize_probe(packet.header), packet.strategy, packet.generation))

    def _flow_source(self, index: int, flow: Flow):
        rng = _np.random.default_rng([self.seed, index])
        switch = self.switches[self.__hosts[flow.source].switch]
        sent = 0
        while flow.count is None or sent < flow.count:
            yield self.env.timeout(float(rng.exponential(1e6 / flow.rate_pps)))
            packet = Packet(PacketKind.DATA, flow.tos, self.env.now,
                payload_size=flow.size, flow_id=index, dst_host=flow.sink)
            self.count('data_generated')
            switch.receive(packet, 0)
            sent += 1

    def _probe_source(self, plan: 'ProbePlan'):
        generation = 0
        while True:
            for index, launch in enumerate(plan.launches):
                self._launch(plan, launch, generation, index)
            generation += 1
            if plan.period_us is None:
                return
            yield self.env.timeout(plan.period_us)

    def _launch(self, plan: 'ProbePlan', launch: 'ProbeLaunch', generation: int, index: int) -> None:
        now = self.env.now
        probe_id = (generation * len(plan.launches) + index) & _U32
        timestamp = int(now) & _U32
        if launch.kind is PacketKind.PROBE_S1:
            header = _tel.IntProbeHeader(probe_id, timestamp, max_hops=len(launch.path))
        else:
            if launch.kind is PacketKind.PROBE_S2:
                target = _tel.UNPINNED if launch.target_queue is None else launch.target_queue
            else:
                target = None
            header = _tel.SrProbeHeader(launch.route.value.value, probe_id, timestamp,
                self.topology.switch_id(launch.origin), target_queue=target)
        packet = Packet(launch.kind, PROBE_TOS, now, header=header, strategy=plan.strategy,
            generation=generation, path=tuple(launch.path), queue_pin=launch.target_queue)
        self.count('probes_launched')
        self.trace(launch.origin, 'inject', packet, port=0)
        self.switches[launch.origin].receive(packet, 0)

    def queue_counters(self) -> dict[tuple[str, int, int], dict[str, int]]:
        '''
        Returns the counters of every queue, keyed by ``(switch, port, queue)``.
        '''
        counters = {}
        for name, switch in self.switches.items():
            for p, egress in switch.ports.items():
                for q, queue in enumerate(egress.queues):
                    counters[(name, p, q)] = dict(enqueued=queue.enqueued,
                        dequeued=queue.dequeued, dropped=queue.dropped, depth=queue.depth)
        return counters

    def run(self, until_us: float) -> SimulationTrace:
        '''
        Runs the simulation up to time ``until_us`` and returns its trace.

        :param float until_us: The end of the simulation in microseconds.
        '''
        if until_us > self.env.now:
            self.env.run(until=until_us)
        strategy = self.workload.plan.strategy if self.workload.plan is not None else None
        if self.__counters.get('mtu_exceeded'):
            _logger.warning("%d probe traversals exceeded the %d-byte MTU.",
                self.__counters['mtu_exceeded'], MTU_BYTES)
        return SimulationTrace(list(self.__records), list(self.__deliveries),
            dict(self.__counters), self.queue_counters(), strategy)


def run(spec: TopologySpec, workload: Workload, seed: int = 0, until_us: float = 1_000_000,
        config: _Optional[SimulationConfig] = None) -> SimulationTrace:
    '''
    Simulates a topology under a workload.

    :param TopologySpec spec: The topology.
    :param Workload workload: The flows and the probe plan.
    :param int seed: The seed of the traffic generators. Defaults to ``0``.
    :param float until_us: The end of the simulation in microseconds. \
        Defaults to one second.
    :param SimulationConfig config: The switch model knobs.
    '''
    return Simulation(spec, workload, seed, config).run(until_us)
