__doc__ = """
This module loads and validates topology documents and derives from them
the rooted spanning tree every probing strategy operates on.

A topology document is YAML text of the following form:

.. code-block:: yaml

   root: SW1
   defaults: {bandwidth_bps: 10000000, delay_us: 50, queue_capacity: 64, nq: 2}
   switches:
     - {name: SW1}
     - {name: SW2, weights: [2, 1]}
   links:
     - {a: SW1, b: SW2}
   hosts:
     - {name: h1, switch: SW1, role: [generator, collector]}

Network ports of a switch are numbered from ``1`` upwards. Unless a link
states its ports explicitly, they are assigned in ascending order of the
neighbouring switch's name. Port ``0`` is where the switch's hosts attach.

Classes & methods
-------------------------------------------

Below are listed all classes and functions within :py:mod:`mmint.core.netmodel`.
"""


import yaml as _yaml
import logging as _logging
import networkx as _nx
import numpy as _np
import dataclasses as _dataclasses
import importlib.resources as _resources
import mmint.core.exceptions as _ex
from jsonschema import Draft202012Validator as _Draft202012Validator
from typing import Any as _Any
from typing import Union as _Union
from typing import Mapping as _Mapping
from typing import Optional as _Optional


_logger = _logging.getLogger(__name__)


# Default link and queue parameters, used whenever a document omits them.
DEFAULT_BANDWIDTH_BPS = 10_000_000
DEFAULT_DELAY_US = 50.0
DEFAULT_QUEUE_CAPACITY = 64
DEFAULT_NQ = 2

# The largest number of queues per port before a warning is issued.
MAX_RECOMMENDED_NQ = 8

ROLES = ('generator', 'collector', 'traffic')


_ROLE_SCHEMA = {'type': 'string', 'enum': list(ROLES)}

TOPOLOGY_SCHEMA = {
    'type': 'object',
    'required': ['switches'],
    'additionalProperties': False,
    'properties': {
        'root': {'type': 'string'},
        'defaults': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'bandwidth_bps': {'type': 'number', 'exclusiveMinimum': 0},
                'delay_us': {'type': 'number', 'minimum': 0},
                'queue_capacity': {'type': 'integer', 'minimum': 1},
                'nq': {'type': 'integer', 'minimum': 1},
            },
        },
        'switches': {
            'type': 'array',
            'minItems': 1,
            'items': {
                'type': 'object',
                'required': ['name'],
                'additionalProperties': False,
                'properties': {
                    'name': {'type': 'string', 'minLength': 1},
                    'ports': {'type': 'integer', 'minimum': 0},
                    'nq': {'type': 'integer', 'minimum': 1},
                    'queue_capacity': {'type': 'integer', 'minimum': 1},
                    'weights': {'type': 'array', 'items': {'type': 'integer'}},
                },
            },
        },
        'links': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['a', 'b'],
                'additionalProperties': False,
                'properties': {
                    'a': {'type': 'string'},
                    'b': {'type': 'string'},
                    'a_port': {'type': 'integer'},
                    'b_port': {'type': 'integer'},
                    'bandwidth_bps': {'type': 'number', 'exclusiveMinimum': 0},
                    'delay_us': {'type': 'number', 'minimum': 0},
                },
            },
        },
        'hosts': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['name', 'switch', 'role'],
                'additionalProperties': False,
                'properties': {
                    'name': {'type': 'string', 'minLength': 1},
                    'switch': {'type': 'string'},
                    'role': {
                        'oneOf': [
                            _ROLE_SCHEMA,
                            {'type': 'array', 'minItems': 1, 'items': _ROLE_SCHEMA},
                        ],
                    },
                },
            },
        },
    },
}


@_dataclasses.dataclass(frozen=True)
class SwitchSpec():
    '''
    A switch along with the configuration of its egress queues.

    :param str name: The name of the switch.
    :param int ports: The number of network ports, numbered ``1..ports``.
    :param int nq: The number of queues per port.
    :param int queue_capacity: The capacity of each queue in packets.
    :param tuple[int] weights: The scheduling weight of each queue.
    '''
    name: str
    ports: int
    nq: int
    queue_capacity: int
    weights: tuple[int, ...]


@_dataclasses.dataclass(frozen=True)
class LinkSpec():
    '''
    A full-duplex link between two switch ports.
    '''
    a: str
    a_port: int
    b: str
    b_port: int
    bandwidth_bps: float
    delay_us: float

    def other_end(self, switch: str) -> tuple[str, int]:
        '''
        Returns the switch and port at the opposite end of the link.

        :param str switch: The switch at this end of the link.
        '''
        return (self.b, self.b_port) if switch == self.a else (self.a, self.a_port)


@_dataclasses.dataclass(frozen=True)
class HostSpec():
    '''
    A host attached to port ``0`` of a switch.
    '''
    name: str
    switch: str
    roles: frozenset


@_dataclasses.dataclass(frozen=True)
class TopologySpec():
    '''
    A validated topology. Instances are created through :func:`load_topology`.

    :param dict[str, SwitchSpec] switches: The switches by name, in ascending name order.
    :param tuple[LinkSpec] links: The links, in document order.
    :param tuple[HostSpec] hosts: The hosts, in document order.
    :param str root: The root of the probing tree.
    :param tuple[str] warnings: Non-fatal validation findings.
    '''
    switches: dict
    links: tuple
    hosts: tuple
    root: str
    warnings: tuple = ()

    def __post_init__(self):
        ports = {}
        for link in self.links:
            ports[(link.a, link.a_port)] = link
            ports[(link.b, link.b_port)] = link
        object.__setattr__(self, '_ports', ports)

    def link_at(self, switch: str, port: int) -> _Optional[LinkSpec]:
        '''
        Returns the link attached to a port, or ``None`` if the port is unused.
        '''
        return self._ports.get((switch, port))

    def peer(self, switch: str, port: int) -> tuple[str, int]:
        '''
        Returns the switch and port at the other end of the link attached to a port.

        :raises InvalidArgumentValueException: No link is attached to the port.
        '''
        link = self.link_at(switch, port)
        if link is None:
            message = f"Port {port} of switch \"{switch}\" is not connected."
            raise _ex.InvalidArgumentValueException(message)
        return link.other_end(switch)

    def port_towards(self, switch: str, neighbor: str) -> int:
        '''
        Returns the port of ``switch`` that connects it to ``neighbor``.

        :raises InvalidArgumentValueException: The two switches are not adjacent.
        '''
        for p in range(1, self.switches[switch].ports + 1):
            link = self.link_at(switch, p)
            if link is not None and link.other_end(switch)[0] == neighbor:
                return p
        message = f"Switches \"{switch}\" and \"{neighbor}\" are not adjacent."
        raise _ex.InvalidArgumentValueException(message)

    def switch_id(self, name: str) -> int:
        '''
        Returns the 16-bit identifier of a switch, i.e. its 1-based \
        position in ascending name order.
        '''
        return list(self.switches).index(name) + 1

    def hosts_with_role(self, role: str, switch: _Optional[str] = None) -> list[HostSpec]:
        '''
        Returns every host with the provided role, optionally restricted \
        to those attached to ``switch``.
        '''
        return [h for h in self.hosts
            if role in h.roles and (switch is None or h.switch == switch)]

    def has_collector(self, switch: str) -> bool:
        '''
        Returns ``True`` if a collector host is attached to the switch.
        '''
        return len(self.hosts_with_role('collector', switch)) > 0

    def slot_universe(self) -> list[tuple[str, int, int]]:
        '''
        Returns every ``(switch, port, queue)`` register slot of the topology.
        '''
        return [(name, p, q) for name, s in self.switches.items()
            for p in range(1, s.ports + 1) for q in range(s.nq)]

    def graph(self) -> _nx.Graph:
        '''
        Returns the switch graph, in which every edge carries its \
        :class:`LinkSpec` under the ``link`` attribute.
        '''
        g = _nx.Graph()
        g.add_nodes_from(self.switches)
        for link in self.links:
            g.add_edge(link.a, link.b, link=link)
        return g


@_dataclasses.dataclass(frozen=True)
class Tree():
    '''
    A spanning tree of a topology, rooted at its probing root.

    :param str root: The root switch.
    :param tuple[str] order: Every switch in breadth-first order.
    :param dict[str, str | None] parent: The parent of every switch.
    :param dict[str, tuple[str]] children: The children of every switch, by name.
    :param dict[str, tuple[int]] child_ports: The ports leading to the children.
    :param dict[str, int | None] parent_port: The port leading to the parent.
    :param tuple[str] leaves: The switches with no children, by name.
    '''
    root: str
    order: tuple
    parent: dict
    children: dict
    child_ports: dict
    parent_port: dict
    leaves: tuple

    def tree_ports(self, switch: str) -> tuple[int, ...]:
        '''
        Returns every port of ``switch`` that belongs to a tree edge, ascending.
        '''
        ports = list(self.child_ports[switch])
        if self.parent_port[switch] is not None:
            ports.append(self.parent_port[switch])
        return tuple(sorted(ports))

    def edges(self) -> list[tuple[str, str]]:
        '''
        Returns every ``(parent, child)`` edge of the tree, in breadth-first order.
        '''
        return [(s, c) for s in self.order for c in self.children[s]]

    def path_from_root(self, switch: str) -> list[str]:
        '''
        Returns the switches on the way from the root to ``switch``, both included.
        '''
        path = [switch]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def path(self, source: str, target: str) -> list[str]:
        '''
        Returns the switches on the tree path from ``source`` to ``target``, \
        both included.
        '''
        up, down = self.path_from_root(source), self.path_from_root(target)
        i = 0
        while i < min(len(up), len(down)) and up[i] == down[i]:
            i += 1
        return up[i - 1:][::-1] + down[i:]


def _format_path(path) -> str:
    s = ''
    for part in path:
        s += f"[{part}]" if isinstance(part, int) else (f".{part}" if s else part)
    return s or '<document>'


def load_topology(document: _Union[str, _Mapping[str, _Any]]) -> TopologySpec:
    '''
    Parses and validates a topology document.

    :param str | Mapping document: Either YAML text or an already parsed document.

    :raises TopologyException: The document is invalid. Every problem found \
        is reported, each prefixed with the path of the offending field.
    '''
    if isinstance(document, str):
        try:
            document = _yaml.safe_load(document)
        except _yaml.YAMLError as e:
            raise _ex.TopologyException([f"<document>: not valid YAML ({e})"])
    errors = [f"{_format_path(e.absolute_path)}: {e.message}" for e in
        sorted(_Draft202012Validator(TOPOLOGY_SCHEMA).iter_errors(document),
            key=lambda e: list(map(str, e.absolute_path)))]
    if errors:
        raise _ex.TopologyException(errors)

    defaults = document.get('defaults', {})
    bandwidth = defaults.get('bandwidth_bps', DEFAULT_BANDWIDTH_BPS)
    delay = defaults.get('delay_us', DEFAULT_DELAY_US)
    capacity = defaults.get('queue_capacity', DEFAULT_QUEUE_CAPACITY)
    default_nq = defaults.get('nq', DEFAULT_NQ)

    # Switches.
    declared: dict[str, tuple[int, dict]] = {}
    for i, sw in enumerate(document['switches']):
        if sw['name'] in declared:
            errors.append(f"switches[{i}].name: duplicate switch \"{sw['name']}\"")
        else:
            declared[sw['name']] = (i, sw)

    # Links, explicit ports first.
    raw_links = document.get('links', [])
    used: dict[tuple[str, int], str] = {}
    ends: list[list] = []
    seen_pairs: set[frozenset] = set()
    for i, link in enumerate(raw_links):
        end_ports = []
        for side in ('a', 'b'):
            name, port = link[side], link.get(f'{side}_port')
            if name not in declared:
                errors.append(f"links[{i}].{side}: unknown switch \"{name}\"")
            elif port is not None:
                if port < 1:
                    errors.append(f"links[{i}].{side}_port: port {port} is reserved" +
                        " for hosts; network ports start at 1")
                elif (name, port) in used:
                    errors.append(f"links[{i}].{side}_port: port {port} of switch" +
                        f" \"{name}\" is already used by {used[(name, port)]}")
                else:
                    used[(name, port)] = f"links[{i}]"
            end_ports.append(port)
        if link['a'] == link['b']:
            errors.append(f"links[{i}]: switch \"{link['a']}\" is linked to itself")
        pair = frozenset((link['a'], link['b']))
        if pair in seen_pairs and link['a'] != link['b']:
            errors.append(f"links[{i}]: switches \"{link['a']}\" and \"{link['b']}\"" +
                " are already linked")
        seen_pairs.add(pair)
        ends.append(end_ports)

    # Then automatic ports, ascending by neighbour name.
    pending: dict[str, list[tuple[str, int, int]]] = {}
    for i, link in enumerate(raw_links):
        for j, side in enumerate(('a', 'b')):
            if ends[i][j] is None and link[side] in declared:
                other = link['b' if side == 'a' else 'a']
                pending.setdefault(link[side], []).append((other, i, j))
    for name, items in pending.items():
        port = 1
        for _, i, j in sorted(items):
            while (name, port) in used:
                port += 1
            used[(name, port)] = f"links[{i}]"
            ends[i][j] = port

    switches: dict[str, SwitchSpec] = {}
    warnings: list[str] = []
    for name in sorted(declared):
        i, sw = declared[name]
        highest = max([p for (s, p) in used if s == name], default=0)
        ports = sw.get('ports', highest)
        if ports < highest:
            errors.append(f"switches[{i}].ports: switch \"{name}\" declares {ports}" +
                f" ports but port {highest} is linked")
        nq = sw.get('nq', default_nq)
        weights = tuple(sw.get('weights', [1] * nq))
        if len(weights) != nq:
            errors.append(f"switches[{i}].weights: expected {nq} weights," +
                f" got {len(weights)}")
        for k, w in enumerate(weights):
            if w <= 0:
                errors.append(f"switches[{i}].weights[{k}]: weight must be positive")
        if nq > MAX_RECOMMENDED_NQ:
            warnings.append(f"switches[{i}].nq: {nq} queues per port exceed the" +
                f" {MAX_RECOMMENDED_NQ} supported by common software switches")
        switches[name] = SwitchSpec(name, ports, nq,
            sw.get('queue_capacity', capacity), weights)

    links = []
    for i, link in enumerate(raw_links):
        if link['a'] in declared and link['b'] in declared:
            links.append(LinkSpec(link['a'], ends[i][0], link['b'], ends[i][1],
                link.get('bandwidth_bps', bandwidth), link.get('delay_us', delay)))

    hosts = []
    host_names: set[str] = set()
    for i, host in enumerate(document.get('hosts', [])):
        if host['name'] in host_names:
            errors.append(f"hosts[{i}].name: duplicate host \"{host['name']}\"")
        host_names.add(host['name'])
        if host['switch'] not in declared:
            errors.append(f"hosts[{i}].switch: unknown switch \"{host['switch']}\"")
        role = host['role']
        hosts.append(HostSpec(host['name'], host['switch'],
            frozenset([role] if isinstance(role, str) else role)))

    root = document.get('root', min(declared) if declared else '')
    if root not in declared:
        errors.append(f"root: unknown switch \"{root}\"")

    if errors:
        raise _ex.TopologyException(errors)
    for w in warnings:
        _logger.warning(w)
    spec = TopologySpec(switches, tuple(links), tuple(hosts), root, tuple(warnings))
    _logger.info("Loaded topology with %d switches, %d links and %d hosts (root %s).",
        len(switches), len(links), len(hosts), root)
    return spec


def load_topology_file(path: str) -> TopologySpec:
    '''
    Reads and validates the topology document at ``path``.

    :param str path: The path of a YAML file.

    :raises TopologyException: The document is invalid.
    :raises FileNotFoundError: There is no such file.
    '''
    with open(path, 'r', encoding='utf-8') as f:
        return load_topology(f.read())


def load_bundled_topology() -> TopologySpec:
    '''
    Loads the bundled seven-switch evaluation topology.
    '''
    text = _resources.files('mmint.data').joinpath('seven_switch.yaml').read_text(encoding='utf-8')
    return load_topology(text)


def to_tree(spec: TopologySpec, root: _Optional[str] = None) -> Tree:
    '''
    Derives a breadth-first spanning tree of the topology. Neighbours are \
    visited in ascending name order, so that the result is deterministic \
    and a topology that is already a tree is left intact.

    :param TopologySpec spec: The topology.
    :param str root: The root of the tree. Defaults to the root of the topology.

    :raises InvalidArgumentValueException: There is no switch named ``root``.
    :raises DisconnectedTopologyException: Some switches cannot be reached from ``root``.
    '''
    root = spec.root if root is None else root
    if root not in spec.switches:
        message = f"There is no switch named \"{root}\"."
        raise _ex.InvalidArgumentValueException(message)
    g = spec.graph()
    bfs = _nx.bfs_tree(g, root, sort_neighbors=sorted)
    unreachable = set(g.nodes) - set(bfs.nodes)
    if unreachable:
        raise _ex.DisconnectedTopologyException(root, list(unreachable))

    order = tuple(bfs.nodes)
    parent, children, child_ports, parent_port = {}, {}, {}, {}
    for s in order:
        preds = list(bfs.predecessors(s))
        parent[s] = preds[0] if preds else None
        parent_port[s] = spec.port_towards(s, parent[s]) if preds else None
        children[s] = tuple(sorted(bfs.successors(s)))
        child_ports[s] = tuple(sorted(spec.port_towards(s, c) for c in children[s]))
    leaves = tuple(sorted(s for s in order if not children[s]))
    return Tree(root, order, parent, children, child_ports, parent_port, leaves)


def _random_tree_edges(n: int, rng: _np.random.Generator) -> list[tuple[int, int]]:
    if n < 2:
        return []
    if n == 2:
        return [(0, 1)]
    sequence = [int(v) for v in rng.integers(0, n, size=n - 2)]
    return sorted(_nx.from_prufer_sequence(sequence).edges)


def random_tree_topology(n: int, nq: int = DEFAULT_NQ, seed: _Optional[int] = None,
        extra_links: int = 0) -> TopologySpec:
    '''
    Generates a random topology of ``n`` switches, drawn uniformly among \
    all labelled trees, optionally with extra links that close cycles. \
    Switch ``S01`` is the root and carries a generator, and every switch \
    carries a collector.

    :param int n: The number of switches.
    :param int nq: The number of queues per port. Defaults to ``2``.
    :param int seed: The seed of the random generator.
    :param int extra_links: The number of additional links between \
        non-adjacent switches. Defaults to ``0``.

    :raises InvalidArgumentValueException: Parameter ``n`` is smaller than ``1``.
    '''
    if n < 1:
        message = "Parameter \"n\" must be a positive integer."
        raise _ex.InvalidArgumentValueException(message)
    rng = _np.random.default_rng(seed)
    names = [f"S{i + 1:02d}" for i in range(n)]
    edges = _random_tree_edges(n, rng)
    present = {frozenset(e) for e in edges}
    candidates = [(i, j) for i in range(n) for j in range(i + 1, n)
        if frozenset((i, j)) not in present]
    if extra_links and candidates:
        picked = rng.choice(len(candidates), size=min(extra_links, len(candidates)), replace=False)
        edges += [candidates[int(k)] for k in sorted(picked)]
    document = {
        'root': names[0],
        'defaults': {'nq': nq},
        'switches': [{'name': s} for s in names],
        'links': [{'a': names[i], 'b': names[j]} for i, j in edges],
        'hosts': [{'name': 'gen', 'switch': names[0], 'role': 'generator'}] +
            [{'name': f"col{s}", 'switch': s, 'role': 'collector'} for s in names],
    }
    return load_topology(document)
