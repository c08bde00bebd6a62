__doc__ = """
This module contains the :class:`Poly` class, which represents a polynomial
over GF(2), along with all functions that perform arithmetic in the ring
GF(2)[x]. A polynomial is stored as a bit vector in which bit ``i`` holds
the coefficient of ``x^i``, so that ``Poly(0b1011)`` stands for
``x^3 + x + 1``.

.. code-block:: python

   from mmint.core.gf2poly import Poly, crt_combine

   m1, m2 = Poly('111'), Poly('1011')
   r = crt_combine([(m1, Poly('10')), (m2, Poly('100'))])

   r % m1 # => Poly('10')
   r % m2 # => Poly('100')

Classes & methods
-------------------------------------------

Below are listed all classes and functions within :py:mod:`mmint.core.gf2poly`.
"""


import itertools as _itertools
import functools as _functools
import mmint.core.exceptions as _ex
from typing import Union as _Union
from typing import Optional as _Optional
from typing import Iterator as _Iterator


class Poly():
    '''
    Represents a polynomial over GF(2).

    :param int | str value: Either a non-negative integer whose bit ``i`` is the \
        coefficient of ``x^i``, or a string of binary digits written most \
        significant coefficient first, e.g. ``'1011'`` for ``x^3 + x + 1``. \
        Defaults to ``0``.

    :raises InvalidArgumentTypeException: Parameter ``value`` is neither an integer \
        nor a string.
    :raises InvalidArgumentValueException: Parameter ``value`` is a negative integer \
        or a string containing characters other than ``0`` and ``1``.

    :note: Instances are immutable and hashable. Two polynomials are equal if and \
        only if their coefficient bit vectors are equal.
    '''

    __slots__ = ('__value',)

    def __init__(self, value: _Union[int, str] = 0) -> 'Poly':
        '''
        Represents a polynomial over GF(2).

        :param int | str value: Either a non-negative integer whose bit ``i`` is the \
            coefficient of ``x^i``, or a string of binary digits written most \
            significant coefficient first, e.g. ``'1011'`` for ``x^3 + x + 1``. \
            Defaults to ``0``.

        :raises InvalidArgumentTypeException: Parameter ``value`` is neither an integer \
            nor a string.
        :raises InvalidArgumentValueException: Parameter ``value`` is a negative integer \
            or a string containing characters other than ``0`` and ``1``.
        '''
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            message = "Provided argument \"value\" is neither an integer nor a string."
            raise _ex.InvalidArgumentTypeException(message)
        if isinstance(value, str):
            if value == '' or any(c not in '01' for c in value):
                message = f"String \"{value}\" is not a binary coefficient string."
                raise _ex.InvalidArgumentValueException(message)
            value = int(value, 2)
        elif value < 0:
            message = "Parameter \"value\" must be a non-negative integer."
            raise _ex.InvalidArgumentValueException(message)
        self.__value = value


    @property
    def value(self) -> int:
        '''
        The coefficient bit vector of this polynomial as an integer.
        '''
        return self.__value


    @property
    def degree(self) -> _Optional[int]:
        '''
        The degree of this polynomial, or ``None`` if this is the zero \
        polynomial, which has no degree.
        '''
        return self.__value.bit_length() - 1 if self.__value else None


    def is_zero(self) -> bool:
        '''
        Returns ``True`` if this is the zero polynomial, else ``False``.
        '''
        return self.__value == 0


    def coefficient(self, i: int) -> int:
        '''
        Returns the coefficient of ``x^i``, which is either ``0`` or ``1``.

        :param int i: The power of ``x``.
        '''
        return (self.__value >> i) & 1


    def to_binary(self, width: int = 0) -> str:
        '''
        Returns the coefficients of this polynomial as a string of binary \
        digits, most significant coefficient first.

        :param int width: The minimum length of the returned string, which is \
            padded with leading zeros if need be. Defaults to ``0``.
        '''
        return format(self.__value, 'b').zfill(max(width, 1))


    def __str__(self) -> str:
        return self.to_binary()


    def __repr__(self) -> str:
        return f"Poly('{self.to_binary()}')"


    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.__value == other.__value
        return NotImplemented


    def __hash__(self) -> int:
        return hash(('Poly', self.__value))


    def __bool__(self) -> bool:
        return self.__value != 0


    def __int__(self) -> int:
        return self.__value


    def __add__(self, other: _Union['Poly', int]) -> 'Poly':
        return add(self, other)


    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__
    __xor__ = __add__


    def __mul__(self, other: _Union['Poly', int]) -> 'Poly':
        return mul(self, other)


    __rmul__ = __mul__


    def __divmod__(self, other: _Union['Poly', int]) -> tuple['Poly', 'Poly']:
        return divmod_(self, other)


    def __floordiv__(self, other: _Union['Poly', int]) -> 'Poly':
        return divmod_(self, other)[0]


    def __mod__(self, other: _Union['Poly', int]) -> 'Poly':
        return divmod_(self, other)[1]


def _to_poly(p: _Union[Poly, int, str], name: str) -> Poly:
    '''
    Converts ``p`` into a ``Poly`` instance if it isn't one already.

    :param Poly | int | str p: The object that is to be converted.
    :param str name: The parameter name used in error messages.
    '''
    if isinstance(p, Poly):
        return p
    if isinstance(p, (int, str)) and not isinstance(p, bool):
        return Poly(p)
    message = f"Provided argument \"{name}\" is not a polynomial."
    raise _ex.InvalidArgumentTypeException(message)


def _clmul(a: int, b: int) -> int:
    '''
    Carry-less multiplication of two bit vectors.
    '''
    if a.bit_length() < b.bit_length():
        a, b = b, a
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _divmod(a: int, m: int) -> tuple[int, int]:
    '''
    Long division of two bit vectors, where ``m`` is non-zero.
    '''
    dm = m.bit_length()
    q = 0
    while a.bit_length() >= dm:
        shift = a.bit_length() - dm
        q ^= 1 << shift
        a ^= m << shift
    return q, a


def add(a: _Union[Poly, int], b: _Union[Poly, int]) -> Poly:
    '''
    Returns the sum of two polynomials, that is, the XOR of their coefficients.

    :param Poly a: The first polynomial.
    :param Poly b: The second polynomial.
    '''
    a, b = _to_poly(a, 'a'), _to_poly(b, 'b')
    return Poly(a.value ^ b.value)


def mul(a: _Union[Poly, int], b: _Union[Poly, int]) -> Poly:
    '''
    Returns the carry-less product of two polynomials.

    :param Poly a: The first polynomial.
    :param Poly b: The second polynomial.
    '''
    a, b = _to_poly(a, 'a'), _to_poly(b, 'b')
    return Poly(_clmul(a.value, b.value))


def divmod_(a: _Union[Poly, int], m: _Union[Poly, int]) -> tuple[Poly, Poly]:
    '''
    Divides ``a`` by ``m`` and returns the pair ``(quotient, remainder)``, \
    such that ``a = quotient * m + remainder`` and the degree of the remainder \
    is smaller than that of ``m``.

    :param Poly a: The dividend.
    :param Poly m: The divisor.

    :raises ZeroPolynomialException: Parameter ``m`` is the zero polynomial.

    :note: ``divmod(a, m)`` as well as the ``//`` and ``%`` operators \
        delegate to this function.
    '''
    a, m = _to_poly(a, 'a'), _to_poly(m, 'm')
    if m.is_zero():
        raise _ex.ZeroPolynomialException('divmod')
    q, r = _divmod(a.value, m.value)
    return Poly(q), Poly(r)


def gcd(a: _Union[Poly, int], b: _Union[Poly, int]) -> Poly:
    '''
    Returns the greatest common divisor of two polynomials.

    :param Poly a: The first polynomial.
    :param Poly b: The second polynomial.

    :raises ZeroPolynomialException: Both polynomials are zero.
    '''
    return egcd(a, b)[0]


def egcd(a: _Union[Poly, int], b: _Union[Poly, int]) -> tuple[Poly, Poly, Poly]:
    '''
    Runs the extended Euclidean algorithm and returns a triple ``(g, u, v)`` \
    such that ``g`` is the greatest common divisor of ``a`` and ``b`` and \
    ``u * a + v * b = g``.

    :param Poly a: The first polynomial.
    :param Poly b: The second polynomial.

    :raises ZeroPolynomialException: Both polynomials are zero.
    '''
    a, b = _to_poly(a, 'a'), _to_poly(b, 'b')
    if a.is_zero() and b.is_zero():
        raise _ex.ZeroPolynomialException('gcd')
    r0, r1 = a.value, b.value
    u0, u1 = 1, 0
    v0, v1 = 0, 1
    while r1:
        q, r = _divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 ^ _clmul(q, u1)
        v0, v1 = v1, v0 ^ _clmul(q, v1)
    return Poly(r0), Poly(u0), Poly(v0)


def inv_mod(a: _Union[Poly, int], m: _Union[Poly, int]) -> Poly:
    '''
    Returns the inverse of ``a`` modulo ``m``, i.e. the polynomial ``b`` \
    of degree smaller than that of ``m`` such that ``a * b % m = 1``.

    :param Poly a: The polynomial that is to be inverted.
    :param Poly m: The modulus.

    :raises ZeroPolynomialException: Parameter ``m`` is the zero polynomial.
    :raises NotCoprimeException: Polynomials ``a`` and ``m`` share a common factor.
    '''
    a, m = _to_poly(a, 'a'), _to_poly(m, 'm')
    if m.is_zero():
        raise _ex.ZeroPolynomialException('inv_mod')
    if m.value == 1:
        return Poly(0)
    g, u, _ = egcd(a % m, m)
    if g.value != 1:
        raise _ex.NotCoprimeException(a, m, g)
    return u % m


def is_irreducible(p: _Union[Poly, int]) -> bool:
    '''
    Returns ``True`` if ``p`` cannot be written as the product of two \
    polynomials of positive degree, else ``False``.

    :param Poly p: The polynomial that is to be tested.

    :raises ZeroPolynomialException: Parameter ``p`` is the zero polynomial.
    :raises InvalidArgumentValueException: Parameter ``p`` is a constant polynomial.

    :note: A polynomial ``p`` of degree ``d`` is irreducible if and only if \
        ``gcd(x^(2^i) - x, p) = 1`` for every ``i`` up to ``d / 2``, which \
        takes time polynomial in ``d``.
    '''
    p = _to_poly(p, 'p')
    if p.is_zero():
        raise _ex.ZeroPolynomialException('is_irreducible')
    if p.degree == 0:
        message = "Irreducibility is not defined for constant polynomials."
        raise _ex.InvalidArgumentValueException(message)
    return _is_irreducible(p.value)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _divmod(a, b)[1]
    return a


@_functools.lru_cache(maxsize=4096)
def _is_irreducible(v: int) -> bool:
    d = v.bit_length() - 1
    if d == 1:
        return True
    if not v & 1:
        return False
    h = 0b10
    for _ in range(d // 2):
        h = _divmod(_clmul(h, h), v)[1]
        if _gcd(v, h ^ 0b10) != 1:
            return False
    return True


def _mobius(n: int) -> int:
    result, f = 1, 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            result = -result
        f += 1
    return -result if n > 1 else result


def count_irreducibles(degree: int) -> int:
    '''
    Returns the number of irreducible polynomials of the provided degree.

    :param int degree: The degree, which must be positive.

    :raises InvalidArgumentTypeException: Parameter ``degree`` is not an integer.
    :raises InvalidArgumentValueException: Parameter ``degree`` is not positive.
    '''
    _check_degree(degree)
    total = sum(_mobius(degree // k) * 2 ** k for k in range(1, degree + 1) if degree % k == 0)
    return total // degree


def iter_irreducibles(degree: int) -> _Iterator[Poly]:
    '''
    Yields every irreducible polynomial of the provided degree, in ascending order.

    :param int degree: The degree of the polynomials.

    :raises InvalidArgumentTypeException: Parameter ``degree`` is not an integer.
    :raises InvalidArgumentValueException: Parameter ``degree`` is not positive.
    '''
    _check_degree(degree)
    return (Poly(v) for v in range(1 << degree, 1 << (degree + 1)) if _is_irreducible(v))


def enumerate_irreducibles(degree: int, count: int) -> list[Poly]:
    '''
    Returns the ``count`` smallest irreducible polynomials of the provided \
    degree, in ascending order.

    :param int degree: The degree of the polynomials.
    :param int count: The number of polynomials that are to be returned.

    :raises InvalidArgumentTypeException: Either ``degree`` or ``count`` is \
        not an integer.
    :raises InvalidArgumentValueException: Parameter ``degree`` is not positive \
        or parameter ``count`` is negative.
    :raises InsufficientIrreduciblesException: There are fewer than ``count`` \
        irreducible polynomials of that degree.
    '''
    _check_degree(degree)
    if isinstance(count, bool) or not isinstance(count, int):
        message = "Provided argument \"count\" is not an integer."
        raise _ex.InvalidArgumentTypeException(message)
    if count < 0:
        message = "Parameter \"count\" must be a non-negative integer."
        raise _ex.InvalidArgumentValueException(message)
    available = count_irreducibles(degree)
    if count > available:
        raise _ex.InsufficientIrreduciblesException(degree, count, available)
    return list(_itertools.islice(iter_irreducibles(degree), count))


def _check_degree(degree: int) -> None:
    if isinstance(degree, bool) or not isinstance(degree, int):
        message = "Provided argument \"degree\" is not an integer."
        raise _ex.InvalidArgumentTypeException(message)
    if degree < 1:
        message = "Parameter \"degree\" must be a positive integer."
        raise _ex.InvalidArgumentValueException(message)


def crt_combine(residues: list[tuple[Poly, Poly]]) -> Poly:
    '''
    Solves a system of congruences ``R % m_i = r_i`` by means of the Chinese \
    Remainder Theorem and returns the unique solution ``R`` whose degree is \
    smaller than the sum of the degrees of all moduli.

    :param list[tuple[Poly, Poly]] residues: A list of ``(modulus, residue)`` pairs.

    :raises ZeroPolynomialException: Some modulus is the zero polynomial.
    :raises ResidueTooLargeException: Some residue is not of smaller degree \
        than its modulus.
    :raises NotCoprimeException: Two moduli share a common factor.
    '''
    pairs = [(_to_poly(m, 'modulus'), _to_poly(r, 'residue')) for m, r in residues]
    for m, r in pairs:
        if m.is_zero():
            raise _ex.ZeroPolynomialException('crt_combine')
        if r.value.bit_length() > m.degree:
            raise _ex.ResidueTooLargeException(m, r)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            g = gcd(pairs[i][0], pairs[j][0])
            if g.value != 1:
                raise _ex.NotCoprimeException(pairs[i][0], pairs[j][0], g)

    big_m = 1
    for m, _ in pairs:
        big_m = _clmul(big_m, m.value)
    result = 0
    for m, r in pairs:
        if r.is_zero():
            continue
        # Mi is the product of every other modulus.
        mi = _divmod(big_m, m.value)[0]
        yi = inv_mod(Poly(mi), m).value
        result ^= _clmul(_clmul(r.value, yi), mi)
    return Poly(_divmod(result, big_m)[1])
