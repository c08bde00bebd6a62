__doc__ = """
This module defines the wire formats of all telemetry probes, the
register dump a multi-queue probe harvests, and the collector that turns
received probes into per-queue occupancy time series.

Three probe formats exist:

* :class:`SrProbeHeader` without a target queue: the source-routed probe
  that collects register dumps, ``58 + 16k`` bytes for ``k`` slots.
* :class:`SrProbeHeader` with a target queue: the source-routed probe that
  is cloned per queue, ``59 + 16k`` bytes.
* :class:`IntProbeHeader`: the hop-by-hop INT probe, ``29 + 16k`` bytes.

.. code-block:: python

   from mmint.core.telemetry import SrProbeHeader, TelemetrySlot, \\
       serialize_probe, parse_probe

   probe = SrProbeHeader(route_id=0b1011, probe_id=1, gen_timestamp=0,
       origin_switch=1, slots=(TelemetrySlot(1, 1, 0),))

   len(serialize_probe(probe)) # => 74

Classes & methods
-------------------------------------------

Below are listed all classes and functions within :py:mod:`mmint.core.telemetry`.
"""


import csv as _csv
import struct as _struct
import logging as _logging
import dataclasses as _dataclasses
import mmint.core.exceptions as _ex
from scapy.packet import Packet as _Packet
from scapy.layers.l2 import Ether as _Ether
from scapy.fields import ByteField as _ByteField, ShortField as _ShortField, \
    IntField as _IntField, XShortField as _XShortField, FieldLenField as _FieldLenField, \
    PacketListField as _PacketListField, XStrFixedLenField as _XStrFixedLenField
from typing import Optional as _Optional
from typing import Iterable as _Iterable


_logger = _logging.getLogger(__name__)


TYPE_SR = 0x1234
TYPE_INT = 0x1235
TYPE_IPV4 = 0x0800

ETHERNET_BYTES = 14
SLOT_BYTES = 16
SR_BASE_BYTES = 58
SR_QUEUE_BASE_BYTES = 59
INT_BASE_BYTES = 29

# The value of the target queue field of a queue-cloned probe
# that has not been pinned to a queue yet.
UNPINNED = 0xFF

# The default INT instruction bitmap: switch id, port ids, queue id and
# occupancy, hop latency and egress timestamp.
INT_INSTRUCTIONS = 0xDC00

DEFAULT_DST_MAC = 'ff:ff:ff:ff:ff:ff'
DEFAULT_SRC_MAC = '02:00:00:00:00:01'


class _SlotLayer(_Packet):
    name = 'TelemetrySlot'
    fields_desc = [
        _ShortField('switch_id', 0),
        _ByteField('port', 0),
        _ByteField('queue', 0),
        _ShortField('enq_qdepth', 0),
        _ShortField('deq_qdepth', 0),
        _IntField('deq_timedelta', 0),
        _IntField('enq_timestamp', 0),
    ]

    def extract_padding(self, s):
        return b'', s


class _SrLayer(_Packet):
    name = 'SrProbe'
    fields_desc = [
        _XStrFixedLenField('route_id', b'\x00' * 32, 32),
        _FieldLenField('slot_count', None, count_of='slots', fmt='H'),
        _IntField('probe_id', 0),
        _IntField('gen_timestamp', 0),
        _ShortField('origin_switch', 0),
        _PacketListField('slots', [], _SlotLayer, count_from=lambda pkt: pkt.slot_count),
    ]


class _SrQueueLayer(_Packet):
    name = 'SrQueueProbe'
    fields_desc = [
        _XStrFixedLenField('route_id', b'\x00' * 32, 32),
        _FieldLenField('slot_count', None, count_of='slots', fmt='H'),
        _IntField('probe_id', 0),
        _IntField('gen_timestamp', 0),
        _ShortField('origin_switch', 0),
        _ByteField('target_queue', UNPINNED),
        _PacketListField('slots', [], _SlotLayer, count_from=lambda pkt: pkt.slot_count),
    ]


class _IntLayer(_Packet):
    name = 'IntProbe'
    fields_desc = [
        _ByteField('ver', 1),
        _ByteField('flags', 0),
        _FieldLenField('hop_count', None, count_of='slots', fmt='B'),
        _ByteField('max_hops', 0),
        _IntField('probe_id', 0),
        _IntField('gen_timestamp', 0),
        _XShortField('instruction_bitmap', INT_INSTRUCTIONS),
        _ByteField('reserved', 0),
        _PacketListField('slots', [], _SlotLayer, count_from=lambda pkt: pkt.hop_count),
    ]


@_dataclasses.dataclass(frozen=True)
class TelemetrySlot():
    '''
    The snapshot of one egress queue, as stored in a register and \
    carried by probes. It is serialized into exactly 16 bytes.

    :param int switch_id: The identifier of the switch.
    :param int port: The egress port.
    :param int queue: The queue of the port.
    :param int enq_qdepth: The queue depth found by the last packet at its enqueue.
    :param int deq_qdepth: The queue depth left behind by the last packet at its dequeue.
    :param int deq_timedelta: The time the last packet spent in the queue, in microseconds.
    :param int enq_timestamp: The time the last packet was enqueued, in microseconds.
    '''
    switch_id: int
    port: int
    queue: int
    enq_qdepth: int = 0
    deq_qdepth: int = 0
    deq_timedelta: int = 0
    enq_timestamp: int = 0

    def to_bytes(self) -> bytes:
        '''
        Returns the 16-byte big-endian representation of the slot.
        '''
        return bytes(self._to_layer())

    @staticmethod
    def from_bytes(data: bytes) -> 'TelemetrySlot':
        '''
        Parses a slot from its 16-byte representation.

        :raises ProbeParseException: Parameter ``data`` is not 16 bytes long.
        '''
        if len(data) != SLOT_BYTES:
            raise _ex.ProbeParseException(f"Expected {SLOT_BYTES} slot bytes, got {len(data)}",
                min(len(data), SLOT_BYTES))
        return TelemetrySlot._from_layer(_SlotLayer(data))

    def _to_layer(self) -> _SlotLayer:
        return _SlotLayer(**_dataclasses.asdict(self))

    @staticmethod
    def _from_layer(layer: _SlotLayer) -> 'TelemetrySlot':
        return TelemetrySlot(*(layer.getfieldval(f.name) for f in _dataclasses.fields(TelemetrySlot)))


@_dataclasses.dataclass(frozen=True)
class SrProbeHeader():
    '''
    The header of a source-routed probe.

    :param int route_id: The 256-bit route identifier.
    :param int probe_id: The identifier of the probe.
    :param int gen_timestamp: The generation time in microseconds.
    :param int origin_switch: The identifier of the switch that generated the probe.
    :param tuple[TelemetrySlot] slots: The telemetry stack.
    :param int | None target_queue: ``None`` for a probe that collects register \
        dumps, else the queue the probe is pinned to, or ``UNPINNED``.
    '''
    route_id: int
    probe_id: int
    gen_timestamp: int
    origin_switch: int
    slots: tuple = ()
    target_queue: _Optional[int] = None
    dst: str = DEFAULT_DST_MAC
    src: str = DEFAULT_SRC_MAC

    @property
    def wire_size(self) -> int:
        base = SR_BASE_BYTES if self.target_queue is None else SR_QUEUE_BASE_BYTES
        return base + SLOT_BYTES * len(self.slots)

    def with_slots(self, slots: _Iterable[TelemetrySlot]) -> 'SrProbeHeader':
        '''
        Returns a copy of this header with ``slots`` appended to its stack.
        '''
        return _dataclasses.replace(self, slots=self.slots + tuple(slots))


@_dataclasses.dataclass(frozen=True)
class IntProbeHeader():
    '''
    The header of a hop-by-hop INT probe, whose stack grows by \
    one slot per hop.
    '''
    probe_id: int
    gen_timestamp: int
    max_hops: int = 0
    slots: tuple = ()
    ver: int = 1
    flags: int = 0
    instruction_bitmap: int = INT_INSTRUCTIONS
    dst: str = DEFAULT_DST_MAC
    src: str = DEFAULT_SRC_MAC

    @property
    def hop_count(self) -> int:
        return len(self.slots)

    @property
    def wire_size(self) -> int:
        return INT_BASE_BYTES + SLOT_BYTES * len(self.slots)

    def with_slots(self, slots: _Iterable[TelemetrySlot]) -> 'IntProbeHeader':
        '''
        Returns a copy of this header with ``slots`` appended to its stack.
        '''
        return _dataclasses.replace(self, slots=self.slots + tuple(slots))


def serialize_probe(probe) -> bytes:
    '''
    Returns the Ethernet frame that carries the provided probe header.

    :param SrProbeHeader | IntProbeHeader probe: The probe header.

    :raises InvalidArgumentTypeException: Parameter ``probe`` is not a probe header.
    '''
    if not isinstance(probe, (SrProbeHeader, IntProbeHeader)):
        message = "Provided argument \"probe\" is not a probe header."
        raise _ex.InvalidArgumentTypeException(message)
    slots = [s._to_layer() for s in probe.slots]
    if isinstance(probe, IntProbeHeader):
        ether = _Ether(dst=probe.dst, src=probe.src, type=TYPE_INT)
        body = _IntLayer(ver=probe.ver, flags=probe.flags, max_hops=probe.max_hops,
            probe_id=probe.probe_id, gen_timestamp=probe.gen_timestamp,
            instruction_bitmap=probe.instruction_bitmap, slots=slots)
    else:
        ether = _Ether(dst=probe.dst, src=probe.src, type=TYPE_SR)
        fields = dict(route_id=probe.route_id.to_bytes(32, 'big'), probe_id=probe.probe_id,
            gen_timestamp=probe.gen_timestamp, origin_switch=probe.origin_switch, slots=slots)
        if probe.target_queue is None:
            body = _SrLayer(**fields)
        else:
            body = _SrQueueLayer(target_queue=probe.target_queue, **fields)
    return bytes(ether / body)


def parse_probe(data: bytes):
    '''
    Parses an Ethernet frame into the probe header it carries.

    :param bytes data: The frame.

    :raises ProbeParseException: The frame is too short, its etherType \
        is not that of a probe, or its length disagrees with its slot count.
    '''
    data = bytes(data)
    if len(data) < ETHERNET_BYTES:
        raise _ex.ProbeParseException("Frame shorter than an Ethernet header", len(data))
    ether = _Ether(data[:ETHERNET_BYTES])
    if ether.type == TYPE_SR:
        if len(data) < SR_BASE_BYTES:
            raise _ex.ProbeParseException("Frame shorter than a source-routed probe", len(data))
        count = _struct.unpack_from('!H', data, 46)[0]
        expected = SR_BASE_BYTES + SLOT_BYTES * count
        if len(data) == expected:
            layer, queue = _SrLayer(data[ETHERNET_BYTES:]), None
        elif len(data) == expected + 1:
            layer = _SrQueueLayer(data[ETHERNET_BYTES:])
            queue = layer.target_queue
        else:
            raise _ex.ProbeParseException(f"Slot count {count} disagrees with frame" +
                f" length {len(data)}", 46)
        return SrProbeHeader(int.from_bytes(layer.route_id, 'big'), layer.probe_id,
            layer.gen_timestamp, layer.origin_switch,
            tuple(TelemetrySlot._from_layer(s) for s in layer.slots), queue,
            ether.dst, ether.src)
    if ether.type == TYPE_INT:
        if len(data) < INT_BASE_BYTES:
            raise _ex.ProbeParseException("Frame shorter than an INT probe", len(data))
        count = data[16]
        if len(data) != INT_BASE_BYTES + SLOT_BYTES * count:
            raise _ex.ProbeParseException(f"Hop count {count} disagrees with frame" +
                f" length {len(data)}", 16)
        layer = _IntLayer(data[ETHERNET_BYTES:])
        return IntProbeHeader(layer.probe_id, layer.gen_timestamp, layer.max_hops,
            tuple(TelemetrySlot._from_layer(s) for s in layer.slots), layer.ver,
            layer.flags, layer.instruction_bitmap, ether.dst, ether.src)
    raise _ex.ProbeParseException(f"Unknown etherType 0x{ether.type:04x}", 12)


def dump_registers(register_file) -> list[TelemetrySlot]:
    '''
    Reads every register slot of a switch, in ascending ``(port, queue)`` order.

    :param RegisterFile register_file: The register file of the switch.
    '''
    return [register_file.slot(p, q)
        for p in range(1, register_file.ports + 1) for q in range(register_file.nq)]


@_dataclasses.dataclass(frozen=True)
class Delivery():
    '''
    A probe handed over to the collector attached to a switch.
    '''
    time_us: float
    switch: str
    data: bytes
    strategy: str
    generation: int


@_dataclasses.dataclass(frozen=True)
class Receipt():
    '''
    The record a collector keeps for every probe it receives.
    '''
    time_us: float
    collector: str
    strategy: str
    generation: int
    probe_id: int
    target_queue: _Optional[int]
    size: int
    slot_count: int
    duplicate: bool = False


@_dataclasses.dataclass(frozen=True)
class Sample():
    time_us: float
    enq_qdepth: int
    deq_qdepth: int
    deq_timedelta: int


class OccupancySeries():
    '''
    Holds the queue occupancy samples received by collectors, keyed \
    by ``(switch, port, queue)``. Sample times strictly increase per key.
    '''

    CSV_COLUMNS = ('time_us', 'switch', 'port', 'queue',
        'enq_qdepth', 'deq_qdepth', 'deq_timedelta_us')

    def __init__(self):
        '''
        Holds the queue occupancy samples received by collectors, keyed \
        by ``(switch, port, queue)``. Sample times strictly increase per key.
        '''
        self.__samples: dict[tuple[str, int, int], list[Sample]] = {}

    def add(self, key: tuple[str, int, int], sample: Sample) -> bool:
        '''
        Appends a sample to the series of ``key``. A sample that is not \
        later than the last one of that series is discarded.

        :return: ``True`` if the sample was appended, else ``False``.
        '''
        samples = self.__samples.setdefault(key, [])
        if samples and samples[-1].time_us >= sample.time_us:
            _logger.debug("Discarded sample of %s at %g us, the series is already at %g us.",
                key, sample.time_us, samples[-1].time_us)
            return False
        samples.append(sample)
        return True

    def keys(self) -> list[tuple[str, int, int]]:
        return sorted(self.__samples)

    def samples(self, key: tuple[str, int, int]) -> list[Sample]:
        return list(self.__samples.get(key, []))

    def switches(self) -> list[str]:
        return sorted({k[0] for k in self.__samples})

    def __len__(self) -> int:
        return sum(len(v) for v in self.__samples.values())

    def write_csv(self, path: str, switch: _Optional[str] = None) -> None:
        '''
        Writes the series as CSV, ordered by key and then by time.

        :param str path: The path of the CSV file.
        :param str switch: If provided, only this switch's series are written.
        '''
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = _csv.writer(f, lineterminator='\n')
            writer.writerow(self.CSV_COLUMNS)
            for key in self.keys():
                if switch is not None and key[0] != switch:
                    continue
                for s in self.__samples[key]:
                    writer.writerow([f"{s.time_us:.3f}", key[0], key[1], key[2],
                        s.enq_qdepth, s.deq_qdepth, s.deq_timedelta])


class Collector():
    '''
    Parses delivered probes into an :class:`OccupancySeries` and a receipt log.

    :param dict[int, str] switch_names: Maps switch identifiers to names, \
        which key the series. Identifiers missing from it are used as is.
    '''

    def __init__(self, switch_names: _Optional[dict[int, str]] = None):
        '''
        Parses delivered probes into an :class:`OccupancySeries` and a receipt log.

        :param dict[int, str] switch_names: Maps switch identifiers to names, \
            which key the series. Identifiers missing from it are used as is.
        '''
        self.__names = dict(switch_names or {})
        self.__seen: set = set()
        self.series = OccupancySeries()
        self.receipts: list[Receipt] = []

    def ingest(self, delivery: Delivery) -> Receipt:
        '''
        Parses a delivered probe and records its receipt and samples.

        :param Delivery delivery: The delivered probe.

        :raises ProbeParseException: The delivered bytes are not a probe.
        '''
        probe = parse_probe(delivery.data)
        target_queue = getattr(probe, 'target_queue', None)
        key = (delivery.switch, probe.probe_id, target_queue)
        duplicate = key in self.__seen
        if duplicate:
            _logger.warning("Collector at %s received probe %d (queue %s) twice.",
                delivery.switch, probe.probe_id, target_queue)
        self.__seen.add(key)
        receipt = Receipt(delivery.time_us, delivery.switch, delivery.strategy,
            delivery.generation, probe.probe_id, target_queue, len(delivery.data),
            len(probe.slots), duplicate)
        self.receipts.append(receipt)
        for slot in probe.slots:
            name = self.__names.get(slot.switch_id, str(slot.switch_id))
            self.series.add((name, slot.port, slot.queue), Sample(delivery.time_us,
                slot.enq_qdepth, slot.deq_qdepth, slot.deq_timedelta))
        return receipt


def collector_ingest(deliveries: _Iterable[Delivery],
        switch_names: _Optional[dict[int, str]] = None) -> tuple[OccupancySeries, list[Receipt]]:
    '''
    Feeds every delivery, in order, to a fresh :class:`Collector`.

    :param Iterable[Delivery] deliveries: The delivered probes, in time order.
    :param dict[int, str] switch_names: Maps switch identifiers to names.
    '''
    collector = Collector(switch_names)
    for d in deliveries:
        collector.ingest(d)
    return collector.series, collector.receipts
