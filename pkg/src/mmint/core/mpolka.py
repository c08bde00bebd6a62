__doc__ = """
This module implements multicast source routing over GF(2) polynomials.
Every switch is bound to an irreducible polynomial, its :class:`NodeId`.
A whole multicast tree is encoded into a single :class:`RouteId`, which
is chosen so that its remainder modulo the node identifier of each switch
is that switch's :class:`TState`, the bit vector of the ports the packet
is to be transmitted on.

.. code-block:: python

   from mmint.core.netmodel import load_bundled_topology, to_tree
   from mmint.core.mpolka import assign_node_ids, encode_forward_tree, \\
       compute_t_state, active_ports

   spec = load_bundled_topology()
   ids = assign_node_ids(spec)
   route = encode_forward_tree(to_tree(spec), ids)

   active_ports(compute_t_state(route, ids['SW6'])) # => [2, 3]

Classes & methods
-------------------------------------------

Below are listed all classes and functions within :py:mod:`mmint.core.mpolka`.
"""


import logging as _logging
import dataclasses as _dataclasses
import mmint.core.exceptions as _ex
import mmint.core.gf2poly as _gf2
from mmint.core.gf2poly import Poly
from typing import Optional as _Optional
from typing import Iterable as _Iterable
from typing import TYPE_CHECKING as _TYPE_CHECKING

if _TYPE_CHECKING:
    from mmint.core.netmodel import TopologySpec, Tree


_logger = _logging.getLogger(__name__)


# The width of the routeID field of a probe header, in bits.
ROUTE_ID_BITS = 256


@_dataclasses.dataclass(frozen=True)
class NodeId():
    '''
    The irreducible polynomial a switch is identified by.

    :param str switch: The name of the switch.
    :param Poly value: The irreducible polynomial.
    '''
    switch: str
    value: Poly

    @property
    def degree(self) -> int:
        '''
        The degree of the node identifier, which is also the width of \
        every transmission state of this switch.
        '''
        return self.value.degree

    def __str__(self) -> str:
        return str(self.value)


@_dataclasses.dataclass(frozen=True)
class TState():
    '''
    The transmission state of a switch, i.e. a bit vector in which bit \
    ``p`` is set if and only if port ``p`` transmits.

    :param int bits: The bit vector.
    :param int width: The number of bits, equal to the degree of the \
        switch's node identifier.

    :raises InvalidArgumentValueException: Parameter ``bits`` does not fit \
        within ``width`` bits.
    '''
    bits: int
    width: int

    def __post_init__(self):
        if self.bits < 0 or self.bits.bit_length() > self.width:
            message = f"State {self.bits:b} does not fit within {self.width} bits."
            raise _ex.InvalidArgumentValueException(message)

    @staticmethod
    def from_ports(ports: _Iterable[int], width: int) -> 'TState':
        '''
        Creates the transmission state in which exactly the provided ports are set.

        :param Iterable[int] ports: The ports that transmit.
        :param int width: The width of the state.
        '''
        bits = 0
        for p in ports:
            bits |= 1 << p
        return TState(bits, width)

    def __str__(self) -> str:
        return format(self.bits, 'b').zfill(self.width)


@_dataclasses.dataclass(frozen=True)
class RouteId():
    '''
    A multicast route identifier.

    :param Poly value: The polynomial encoding the route.
    '''
    value: Poly

    def to_bytes(self) -> bytes:
        '''
        Returns the 32-byte big-endian wire representation of this route.

        :raises RouteOverflowException: The route does not fit within 256 bits.
        '''
        bits = self.value.value.bit_length()
        if bits > ROUTE_ID_BITS:
            raise _ex.RouteOverflowException(bits, ROUTE_ID_BITS)
        return self.value.value.to_bytes(ROUTE_ID_BITS // 8, 'big')

    @staticmethod
    def from_bytes(data: bytes) -> 'RouteId':
        '''
        Creates a route from its big-endian wire representation.

        :param bytes data: The route identifier bytes.
        '''
        return RouteId(Poly(int.from_bytes(data, 'big')))

    def __str__(self) -> str:
        return str(self.value)


def assign_node_ids(topology: 'TopologySpec') -> dict[str, NodeId]:
    '''
    Assigns a distinct irreducible polynomial to every switch of the topology.

    Switches are processed in ascending name order. Each switch receives the \
    smallest unused irreducible polynomial whose degree exceeds its highest \
    port index, moving on to the next degree whenever the current one \
    has been exhausted.

    :param TopologySpec topology: A validated topology.

    :note: Distinct irreducible polynomials are pairwise coprime, so that \
        the returned identifiers can always be combined into a route.
    '''
    used: set[int] = set()
    node_ids: dict[str, NodeId] = {}
    for name in sorted(topology.switches):
        degree = topology.switches[name].ports + 1
        chosen: _Optional[Poly] = None
        while chosen is None:
            for p in _gf2.iter_irreducibles(degree):
                if p.value not in used:
                    chosen = p
                    break
            else:
                degree += 1
        used.add(chosen.value)
        node_ids[name] = NodeId(name, chosen)
        _logger.debug("Switch %s bound to nodeID %s (degree %d).", name, chosen, chosen.degree)
    _logger.info("Assigned %d nodeIDs, %d bits in total.",
        len(node_ids), sum(n.degree for n in node_ids.values()))
    return node_ids


def encode_tree(tree: 'Tree', node_ids: dict[str, NodeId], states: dict[str, TState]) -> RouteId:
    '''
    Encodes the transmission states of every switch within the tree \
    into a single route identifier.

    :param Tree tree: The tree whose switches are to be encoded.
    :param dict[str, NodeId] node_ids: The node identifier of every switch.
    :param dict[str, TState] states: The transmission state of each switch. \
        Switches of the tree that are missing from this mapping are encoded \
        with the all-zero state, i.e. they drop the packet.

    :raises InvalidArgumentValueException: A state has the wrong width, sets \
        port ``0``, or sets a port that is not a port of the tree.
    :raises RouteOverflowException: The route does not fit within 256 bits.
    '''
    residues = []
    for switch in tree.order:
        node = node_ids[switch]
        state = states.get(switch, TState(0, node.degree))
        if state.width != node.degree:
            message = f"State of switch \"{switch}\" is {state.width} bits wide" + \
                f" but its nodeID has degree {node.degree}."
            raise _ex.InvalidArgumentValueException(message)
        if state.bits & 1:
            message = f"State of switch \"{switch}\" sets the reserved host port 0."
            raise _ex.InvalidArgumentValueException(message)
        stray = set(active_ports(state)) - set(tree.tree_ports(switch))
        if stray:
            message = f"State of switch \"{switch}\" sets ports {sorted(stray)}" + \
                " that are not part of the tree."
            raise _ex.InvalidArgumentValueException(message)
        residues.append((node.value, Poly(state.bits)))
    route = _gf2.crt_combine(residues)
    bits = route.value.bit_length()
    if bits > ROUTE_ID_BITS:
        raise _ex.RouteOverflowException(bits, ROUTE_ID_BITS)
    return RouteId(route)


def forward_states(tree: 'Tree', node_ids: dict[str, NodeId]) -> dict[str, TState]:
    '''
    Returns the transmission states that carry a packet from the root \
    of the tree down to every leaf.

    :param Tree tree: The tree.
    :param dict[str, NodeId] node_ids: The node identifier of every switch.
    '''
    return {
        s: TState.from_ports(tree.child_ports[s], node_ids[s].degree)
        for s in tree.order
    }


def encode_forward_tree(tree: 'Tree', node_ids: dict[str, NodeId]) -> RouteId:
    '''
    Encodes the route that carries a packet from the root of the tree \
    down to every leaf.

    :param Tree tree: The tree.
    :param dict[str, NodeId] node_ids: The node identifier of every switch.

    :raises RouteOverflowException: The route does not fit within 256 bits.
    '''
    return encode_tree(tree, node_ids, forward_states(tree, node_ids))


def compute_t_state(route: RouteId, node: NodeId) -> TState:
    '''
    Computes the transmission state of a switch as the remainder of \
    the route divided by the switch's node identifier.

    :param RouteId route: The route carried by the packet.
    :param NodeId node: The node identifier of the switch.
    '''
    return TState((route.value % node.value).value, node.degree)


def active_ports(state: TState) -> list[int]:
    '''
    Returns the ports of a transmission state that transmit, in ascending \
    order. The first of them is the port on which metadata is inserted. \
    Port ``0`` is never included.

    :param TState state: The transmission state.
    '''
    return [p for p in range(1, state.width) if (state.bits >> p) & 1]
