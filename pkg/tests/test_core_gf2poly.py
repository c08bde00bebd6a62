import random
import unittest
from mmint.core.gf2poly import *
from mmint.core.exceptions import ZeroPolynomialException, NotCoprimeException, \
    ResidueTooLargeException, InsufficientIrreduciblesException, \
    InvalidArgumentTypeException, InvalidArgumentValueException


def _ref_add(a: int, b: int) -> int:
    result, i = 0, 0
    while a >> i or b >> i:
        if ((a >> i) & 1) != ((b >> i) & 1):
            result |= 1 << i
        i += 1
    return result


def _ref_mul(a: int, b: int) -> int:
    result = 0
    for i in range(b.bit_length()):
        if (b >> i) & 1:
            result ^= a << i
    return result


class TestPoly(unittest.TestCase):

    def test_poly_from_binary_string(self):
        self.assertEqual(Poly('1011').value, 0b1011)

    def test_poly_from_int(self):
        self.assertEqual(Poly(0b1011), Poly('1011'))

    def test_poly_str_is_msb_first(self):
        self.assertEqual(str(Poly(0b110)), '110')
        self.assertEqual(Poly(0b10).to_binary(width=4), '0010')

    def test_poly_repr(self):
        self.assertEqual(repr(Poly(0b111)), "Poly('111')")

    def test_poly_degree(self):
        self.assertEqual(Poly('100011011').degree, 8)
        self.assertEqual(Poly(1).degree, 0)

    def test_poly_zero_has_no_degree(self):
        zero = Poly(0)
        self.assertTrue(zero.is_zero())
        self.assertIsNone(zero.degree)
        self.assertEqual(str(zero), '0')

    def test_poly_leading_zeros_do_not_matter(self):
        self.assertEqual(Poly('0011'), Poly('11'))
        self.assertEqual(hash(Poly('0011')), hash(Poly('11')))

    def test_poly_coefficient(self):
        p = Poly('1011')
        self.assertEqual([p.coefficient(i) for i in range(5)], [1, 1, 0, 1, 0])

    def test_poly_on_invalid_argument_type_exception(self):
        for value in [1.5, None, True, [1]]:
            with self.assertRaises(InvalidArgumentTypeException):
                Poly(value)

    def test_poly_on_invalid_argument_value_exception(self):
        for value in [-1, '', '102', 'x+1']:
            with self.assertRaises(InvalidArgumentValueException):
                Poly(value)

    def test_poly_operators(self):
        a, m = Poly('101010'), Poly('100')
        self.assertEqual(a + m, add(a, m))
        self.assertEqual(a * m, mul(a, m))
        self.assertEqual(divmod(a, m), divmod_(a, m))
        self.assertEqual(a // m, Poly('1010'))
        self.assertEqual(a % m, Poly('10'))


class TestAdd(unittest.TestCase):

    def test_add(self):
        self.assertEqual(add(Poly('1011'), Poly('1101')), Poly('0110'))

    def test_add_identity(self):
        p = Poly('110101')
        self.assertEqual(add(p, Poly(0)), p)

    def test_add_self_is_zero(self):
        p = Poly('110101')
        self.assertTrue(add(p, p).is_zero())

    def test_add_on_random_pairs(self):
        rng = random.Random(1)
        for _ in range(1000):
            a, b = rng.getrandbits(40), rng.getrandbits(40)
            self.assertEqual(add(a, b).value, _ref_add(a, b))
            self.assertEqual(add(a, b), add(b, a))


class TestMul(unittest.TestCase):

    def test_mul(self):
        self.assertEqual(mul(Poly('11'), Poly('11')), Poly('101'))

    def test_mul_identity(self):
        p = Poly('110101')
        self.assertEqual(mul(p, Poly(1)), p)

    def test_mul_degree(self):
        self.assertEqual(mul(Poly('1011'), Poly('111')).degree, 5)

    def test_mul_on_random_pairs(self):
        rng = random.Random(2)
        for _ in range(1000):
            a, b = rng.getrandbits(32), rng.getrandbits(32)
            self.assertEqual(mul(a, b).value, _ref_mul(a, b))


class TestDivmod(unittest.TestCase):

    def test_divmod_self(self):
        p = Poly('100011011')
        self.assertEqual(divmod_(p, p), (Poly(1), Poly(0)))

    def test_divmod_by_monomial(self):
        self.assertEqual(divmod_(Poly('100010'), Poly('100')), (Poly('1000'), Poly('10')))
        self.assertEqual(divmod_(Poly('101010'), Poly('100')), (Poly('1010'), Poly('10')))

    def test_divmod_on_zero_divisor(self):
        with self.assertRaises(ZeroPolynomialException):
            divmod_(Poly('101'), Poly(0))

    def test_divmod_on_random_pairs(self):
        rng = random.Random(3)
        for _ in range(1000):
            a, m = Poly(rng.getrandbits(64)), Poly(rng.getrandbits(20) | 1)
            q, r = divmod_(a, m)
            self.assertEqual(add(mul(q, m), r), a)
            self.assertTrue(r.is_zero() or r.degree < m.degree)


class TestGcd(unittest.TestCase):

    def test_gcd_self(self):
        p = Poly('110101')
        self.assertEqual(gcd(p, p), p)

    def test_gcd_of_distinct_irreducibles(self):
        self.assertEqual(gcd(Poly('111'), Poly('1011')), Poly(1))

    def test_gcd_with_common_factor(self):
        f = Poly('111')
        self.assertEqual(gcd(mul(f, Poly('1011')), mul(f, Poly('1101'))), f)

    def test_gcd_with_zero(self):
        self.assertEqual(gcd(Poly(0), Poly('101')), Poly('101'))

    def test_gcd_on_both_zero(self):
        with self.assertRaises(ZeroPolynomialException):
            gcd(Poly(0), Poly(0))

    def test_egcd_identity_on_random_pairs(self):
        rng = random.Random(4)
        for _ in range(1000):
            a, b = Poly(rng.getrandbits(24) | 1), Poly(rng.getrandbits(24))
            g, u, v = egcd(a, b)
            self.assertEqual(add(mul(u, a), mul(v, b)), g)
            self.assertTrue((a % g).is_zero() and (b % g).is_zero())


class TestInvMod(unittest.TestCase):

    def test_inv_mod_of_one(self):
        self.assertEqual(inv_mod(Poly(1), Poly('1011')), Poly(1))

    def test_inv_mod(self):
        self.assertEqual(inv_mod(Poly('10'), Poly('111')), Poly('11'))

    def test_inv_mod_on_not_coprime(self):
        with self.assertRaises(NotCoprimeException) as cm:
            inv_mod(Poly('110'), Poly('1010'))
        self.assertEqual(cm.exception.factor, Poly('110'))

    def test_inv_mod_on_random_pairs(self):
        rng = random.Random(5)
        m = Poly('100011011')
        for _ in range(300):
            a = Poly(rng.getrandbits(8) or 1)
            self.assertEqual(mul(a, inv_mod(a, m)) % m, Poly(1))


class TestIsIrreducible(unittest.TestCase):

    def test_is_irreducible(self):
        self.assertTrue(is_irreducible(Poly('111')))
        self.assertTrue(is_irreducible(Poly('100011011')))

    def test_is_irreducible_on_reducible(self):
        self.assertFalse(is_irreducible(Poly('110')))
        self.assertFalse(is_irreducible(Poly('101')))

    def test_is_irreducible_on_degree_one(self):
        self.assertTrue(is_irreducible(Poly('10')))
        self.assertTrue(is_irreducible(Poly('11')))

    def test_is_irreducible_on_zero(self):
        with self.assertRaises(ZeroPolynomialException):
            is_irreducible(Poly(0))

    def test_is_irreducible_on_constant(self):
        with self.assertRaises(InvalidArgumentValueException):
            is_irreducible(Poly(1))

    def test_is_irreducible_on_large_degree(self):
        self.assertTrue(is_irreducible(Poly((1 << 64) | 0b11011)))
        self.assertTrue(is_irreducible(Poly((1 << 128) | 0b10000111)))
        self.assertFalse(is_irreducible(mul(Poly((1 << 64) | 0b11011), Poly('111'))))

    def test_is_irreducible_on_all_polynomials_up_to_degree_10(self):
        reducible = set()
        for a in range(2, 1 << 10):
            da = a.bit_length() - 1
            for b in range(2, 1 << (11 - da)):
                p = _ref_mul(a, b)
                if p < 1 << 11:
                    reducible.add(p)
        for p in range(2, 1 << 11):
            self.assertEqual(is_irreducible(Poly(p)), p not in reducible, format(p, 'b'))


class TestEnumerateIrreducibles(unittest.TestCase):

    def test_enumerate_irreducibles_of_degree_2(self):
        self.assertEqual(enumerate_irreducibles(2, 1), [Poly('111')])

    def test_enumerate_irreducibles_of_degree_3(self):
        self.assertEqual(enumerate_irreducibles(3, 2), [Poly('1011'), Poly('1101')])

    def test_enumerate_irreducibles_is_ascending(self):
        values = [p.value for p in enumerate_irreducibles(8, 30)]
        self.assertEqual(values, sorted(values))
        self.assertEqual(values[0], 0b100011011)

    def test_enumerate_irreducibles_on_insufficient(self):
        with self.assertRaises(InsufficientIrreduciblesException) as cm:
            enumerate_irreducibles(2, 2)
        self.assertIn("only 1 exist", str(cm.exception))

    def test_enumerate_irreducibles_on_invalid_arguments(self):
        with self.assertRaises(InvalidArgumentValueException):
            enumerate_irreducibles(0, 1)
        with self.assertRaises(InvalidArgumentTypeException):
            enumerate_irreducibles(2.0, 1)
        with self.assertRaises(InvalidArgumentValueException):
            enumerate_irreducibles(3, -1)

    def test_count_irreducibles_against_brute_force(self):
        for d in range(1, 13):
            found = sum(1 for v in range(1 << d, 1 << (d + 1)) if is_irreducible(Poly(v)))
            self.assertEqual(count_irreducibles(d), found, d)

    def test_count_irreducibles_of_large_degree(self):
        self.assertEqual(count_irreducibles(8), 30)
        self.assertEqual(count_irreducibles(16), 4080)

    def test_iter_irreducibles_of_large_degree(self):
        first = next(iter_irreducibles(51))
        self.assertEqual(first.degree, 51)
        self.assertTrue(is_irreducible(first))

    def test_distinct_irreducibles_are_coprime(self):
        ps = [p for d in range(1, 9) for p in enumerate_irreducibles(d, count_irreducibles(d))]
        for i, a in enumerate(ps):
            for b in ps[i + 1:]:
                self.assertEqual(gcd(a, b), Poly(1))


class TestCrtCombine(unittest.TestCase):

    def test_crt_combine_single_pair(self):
        self.assertEqual(crt_combine([(Poly('1011'), Poly('110'))]), Poly('110'))

    def test_crt_combine_against_brute_force(self):
        m1, m2 = Poly('111'), Poly('1011')
        r1, r2 = Poly('10'), Poly('100')
        solutions = [Poly(c) for c in range(32) if Poly(c) % m1 == r1 and Poly(c) % m2 == r2]
        self.assertEqual(solutions, [crt_combine([(m1, r1), (m2, r2)])])

    def test_crt_combine_on_small_systems_against_brute_force(self):
        rng = random.Random(6)
        pool = [p for d in range(2, 6) for p in enumerate_irreducibles(d, count_irreducibles(d))]
        for _ in range(5):
            moduli, total = [], 0
            for p in rng.sample(pool, len(pool)):
                if total + p.degree <= 12:
                    moduli.append(p)
                    total += p.degree
            residues = [(m, Poly(rng.getrandbits(m.degree))) for m in moduli]
            solutions = [c for c in range(1 << total)
                if all(Poly(c) % m == r for m, r in residues)]
            self.assertEqual(solutions, [crt_combine(residues).value])

    def test_crt_combine_on_random_systems(self):
        rng = random.Random(7)
        pool = [p for d in range(3, 9) for p in enumerate_irreducibles(d, count_irreducibles(d))]
        for _ in range(100):
            moduli = rng.sample(pool, rng.randint(1, 8))
            residues = [(m, Poly(rng.getrandbits(m.degree))) for m in moduli]
            r = crt_combine(residues)
            self.assertLess(r.value.bit_length(), sum(m.degree for m in moduli) + 1)
            for m, res in residues:
                self.assertEqual(r % m, res)

    def test_crt_combine_on_not_coprime(self):
        with self.assertRaises(NotCoprimeException):
            crt_combine([(Poly('111'), Poly('1')), (Poly('1001'), Poly('10'))])

    def test_crt_combine_on_residue_too_large(self):
        with self.assertRaises(ResidueTooLargeException):
            crt_combine([(Poly('111'), Poly('100'))])

    def test_crt_combine_on_zero_modulus(self):
        with self.assertRaises(ZeroPolynomialException):
            crt_combine([(Poly(0), Poly(0))])
