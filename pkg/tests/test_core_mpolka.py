import random
import unittest
from mmint.core.mpolka import *
from mmint.core.gf2poly import Poly, gcd
from mmint.core.netmodel import load_bundled_topology, load_topology, \
    random_tree_topology, to_tree
from mmint.core.exceptions import InvalidArgumentValueException, RouteOverflowException


BUNDLED_NODE_IDS = {
    'SW1': '1011',
    'SW2': '1101',
    'SW3': '111',
    'SW4': '10011',
    'SW5': '11001',
    'SW6': '11111',
    'SW7': '100101',
}


def _random_state(rng: random.Random, tree, ids: dict, switch: str) -> TState:
    ports = [p for p in tree.tree_ports(switch) if rng.random() < 0.5]
    return TState.from_ports(ports, ids[switch].degree)


class TestTState(unittest.TestCase):

    def test_tstate_from_ports(self):
        self.assertEqual(TState.from_ports([2, 3], 4), TState(0b1100, 4))

    def test_tstate_str_is_zero_padded(self):
        self.assertEqual(str(TState(0b10, 4)), '0010')

    def test_tstate_on_overflow(self):
        with self.assertRaises(InvalidArgumentValueException):
            TState(0b10000, 4)

    def test_active_ports_skip_port_zero(self):
        self.assertEqual(active_ports(TState(0b1011, 4)), [1, 3])

    def test_active_ports_on_empty_state(self):
        self.assertEqual(active_ports(TState(0, 5)), [])


class TestRouteId(unittest.TestCase):

    def test_route_id_to_bytes(self):
        data = RouteId(Poly('1011')).to_bytes()
        self.assertEqual(len(data), ROUTE_ID_BITS // 8)
        self.assertEqual(data[-1], 0b1011)
        self.assertEqual(RouteId.from_bytes(data), RouteId(Poly('1011')))

    def test_route_id_to_bytes_on_overflow(self):
        with self.assertRaises(RouteOverflowException):
            RouteId(Poly(1 << ROUTE_ID_BITS)).to_bytes()


class TestAssignNodeIds(unittest.TestCase):

    def test_assign_node_ids_on_bundled_topology(self):
        ids = assign_node_ids(load_bundled_topology())
        self.assertEqual({s: str(n) for s, n in ids.items()}, BUNDLED_NODE_IDS)

    def test_assign_node_ids_degree_exceeds_ports(self):
        spec = load_bundled_topology()
        for name, node in assign_node_ids(spec).items():
            self.assertGreater(node.degree, spec.switches[name].ports)

    def test_assign_node_ids_are_pairwise_coprime(self):
        ids = list(assign_node_ids(random_tree_topology(30, seed=3)).values())
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                self.assertEqual(gcd(a.value, b.value), Poly(1))

    def test_assign_node_ids_are_deterministic(self):
        spec = random_tree_topology(12, seed=5)
        self.assertEqual(assign_node_ids(spec), assign_node_ids(spec))


class TestEncodeTree(unittest.TestCase):

    def setUp(self):
        self.spec = load_bundled_topology()
        self.tree = to_tree(self.spec)
        self.ids = assign_node_ids(self.spec)

    def test_forward_tree_states_on_bundled_topology(self):
        route = encode_forward_tree(self.tree, self.ids)
        expected = {
            'SW1': [1, 2],
            'SW2': [2],
            'SW5': [2],
            'SW6': [2, 3],
            'SW3': [],
            'SW4': [],
            'SW7': [],
        }
        for switch, ports in expected.items():
            self.assertEqual(active_ports(compute_t_state(route, self.ids[switch])), ports, switch)

    def test_forward_tree_route_width(self):
        route = encode_forward_tree(self.tree, self.ids)
        total = sum(n.degree for n in self.ids.values())
        self.assertLessEqual(route.value.value.bit_length(), total)

    def test_encode_tree_recovers_every_state(self):
        states = {
            'SW1': TState.from_ports([2], 3),
            'SW5': TState.from_ports([1], 4),
            'SW6': TState.from_ports([1, 3], 4),
        }
        route = encode_tree(self.tree, self.ids, states)
        for switch in self.tree.order:
            expected = states.get(switch, TState(0, self.ids[switch].degree))
            self.assertEqual(compute_t_state(route, self.ids[switch]), expected, switch)

    def test_encode_tree_on_random_states(self):
        rng = random.Random(5)
        for _ in range(200):
            spec = random_tree_topology(rng.randint(2, 15), seed=rng.randrange(1 << 30))
            tree, ids = to_tree(spec), assign_node_ids(spec)
            states = {s: _random_state(rng, tree, ids, s) for s in tree.order}
            route = encode_tree(tree, ids, states)
            for switch in tree.order:
                self.assertEqual(compute_t_state(route, ids[switch]), states[switch], switch)

    def test_encode_tree_changes_one_switch_only(self):
        rng = random.Random(8)
        states = {s: _random_state(rng, self.tree, self.ids, s) for s in self.tree.order}
        before = encode_tree(self.tree, self.ids, states)
        for switch in self.tree.order:
            changed = dict(states)
            changed[switch] = TState(0, self.ids[switch].degree) if states[switch].bits else \
                TState.from_ports(self.tree.tree_ports(switch), self.ids[switch].degree)
            after = encode_tree(self.tree, self.ids, changed)
            for other in self.tree.order:
                self.assertEqual(compute_t_state(after, self.ids[other]),
                    changed[other], (switch, other))
                if other != switch:
                    self.assertEqual(compute_t_state(after, self.ids[other]),
                        compute_t_state(before, self.ids[other]))

    def test_encode_tree_on_wrong_width(self):
        with self.assertRaises(InvalidArgumentValueException):
            encode_tree(self.tree, self.ids, {'SW1': TState.from_ports([1], 4)})

    def test_encode_tree_on_host_port(self):
        with self.assertRaises(InvalidArgumentValueException):
            encode_tree(self.tree, self.ids, {'SW1': TState(0b1, 3)})

    def test_encode_tree_on_port_outside_tree(self):
        spec = load_topology({
            'root': 'A',
            'switches': [{'name': 'A', 'ports': 3}, {'name': 'B'}],
            'links': [{'a': 'A', 'b': 'B'}],
        })
        tree, ids = to_tree(spec), assign_node_ids(spec)
        with self.assertRaises(InvalidArgumentValueException):
            encode_tree(tree, ids, {'A': TState.from_ports([3], ids['A'].degree)})

    def test_forward_tree_on_random_trees(self):
        for seed in range(10):
            spec = random_tree_topology(15, seed=seed)
            tree, ids = to_tree(spec), assign_node_ids(spec)
            route = encode_forward_tree(tree, ids)
            for switch in tree.order:
                self.assertEqual(active_ports(compute_t_state(route, ids[switch])),
                    list(tree.child_ports[switch]))

    def test_forward_tree_on_overflow(self):
        spec = random_tree_topology(60, seed=1)
        with self.assertRaises(RouteOverflowException):
            encode_forward_tree(to_tree(spec), assign_node_ids(spec))
