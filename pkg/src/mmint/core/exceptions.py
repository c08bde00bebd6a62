class MMIntException(Exception):
    '''
    Constitutes the base class for every exception that is \
    specific to the `mmint` package.

    :param str message: The message that is to be displayed \
        along with the exception.
    '''

    def __init__(self, message: str):
        '''
        Constitutes the base class for every exception that is \
        specific to the `mmint` package.

        :param str message: The message that is to be displayed \
            along with the exception.
        '''
        super().__init__(message)


class InvalidArgumentValueException(MMIntException):
    '''
    This exception is thrown whenever an argument of invalid value is provided.

    :param str message: The message that is to be displayed \
        along with the exception.
    '''

    def __init__(self, message: str):
        '''
        This exception is thrown whenever an argument of invalid value is provided.

        :param str message: The message that is to be displayed \
            along with the exception.
        '''
        super().__init__(message)


class InvalidArgumentTypeException(MMIntException):
    '''
    This exception is thrown whenever an argument of invalid type is provided.

    :param str message: The message that is to be displayed \
        along with the exception.
    '''

    def __init__(self, message: str):
        '''
        This exception is thrown whenever an argument of invalid type is provided.

        :param str message: The message that is to be displayed \
            along with the exception.
        '''
        super().__init__(message)


class ZeroPolynomialException(MMIntException):
    '''
    This exception is thrown whenever an operation that is undefined \
    for the zero polynomial receives it, e.g. a division by zero or \
    a request for its degree.

    :param str operation: The name of the operation because of which \
        this exception was thrown.
    '''

    def __init__(self, operation: str):
        '''
        This exception is thrown whenever an operation that is undefined \
        for the zero polynomial receives it, e.g. a division by zero or \
        a request for its degree.

        :param str operation: The name of the operation because of which \
            this exception was thrown.
        '''
        super().__init__(f"Operation \"{operation}\" is not defined for the zero polynomial.")


class NotCoprimeException(MMIntException):
    '''
    This exception is thrown whenever two polynomials that are required \
    to be coprime share a non-trivial common factor.

    :param Poly a: The first polynomial.
    :param Poly b: The second polynomial.
    :param Poly factor: Their greatest common divisor.
    '''

    def __init__(self, a, b, factor):
        '''
        This exception is thrown whenever two polynomials that are required \
        to be coprime share a non-trivial common factor.

        :param Poly a: The first polynomial.
        :param Poly b: The second polynomial.
        :param Poly factor: Their greatest common divisor.
        '''
        self.factor = factor
        super().__init__(f"Polynomials \"{a}\" and \"{b}\" are not coprime:" +
            f" they share the common factor \"{factor}\".")


class ResidueTooLargeException(MMIntException):
    '''
    This exception is thrown whenever a residue is not reduced modulo \
    the modulus it is paired with.

    :param Poly modulus: The modulus of the pair.
    :param Poly residue: The residue of the pair.
    '''

    def __init__(self, modulus, residue):
        '''
        This exception is thrown whenever a residue is not reduced modulo \
        the modulus it is paired with.

        :param Poly modulus: The modulus of the pair.
        :param Poly residue: The residue of the pair.
        '''
        super().__init__(f"Residue \"{residue}\" is not of smaller degree" +
            f" than its modulus \"{modulus}\".")


class InsufficientIrreduciblesException(MMIntException):
    '''
    This exception is thrown whenever more irreducible polynomials \
    of some degree are requested than there exist.

    :param int degree: The requested degree.
    :param int requested: The number of polynomials that were requested.
    :param int available: The number of irreducible polynomials of that degree.
    '''

    def __init__(self, degree: int, requested: int, available: int):
        '''
        This exception is thrown whenever more irreducible polynomials \
        of some degree are requested than there exist.

        :param int degree: The requested degree.
        :param int requested: The number of polynomials that were requested.
        :param int available: The number of irreducible polynomials of that degree.
        '''
        super().__init__(f"Requested {requested} irreducible polynomials of degree" +
            f" {degree}, but only {available} exist.")


class RouteOverflowException(MMIntException):
    '''
    This exception is thrown whenever an encoded route identifier \
    does not fit within its wire field.

    :param int bits: The number of bits the route identifier requires.
    :param int limit: The width of the wire field in bits.
    '''

    def __init__(self, bits: int, limit: int):
        '''
        This exception is thrown whenever an encoded route identifier \
        does not fit within its wire field.

        :param int bits: The number of bits the route identifier requires.
        :param int limit: The width of the wire field in bits.
        '''
        super().__init__(f"The route identifier requires {bits} bits, which exceeds" +
            f" the {limit}-bit wire field. Encode fewer switches or assign" +
            " node identifiers of lower degree.")


class TopologyException(MMIntException):
    '''
    This exception is thrown whenever a topology document is invalid. \
    All detected problems are reported at once.

    :param list[str] errors: One diagnostic per problem, each of the form \
        ``path.to.field: message``.
    '''

    def __init__(self, errors: list):
        '''
        This exception is thrown whenever a topology document is invalid. \
        All detected problems are reported at once.

        :param list[str] errors: One diagnostic per problem, each of the form \
            ``path.to.field: message``.
        '''
        self.errors = list(errors)
        m = f"Invalid topology ({len(self.errors)} problem"
        m += "s):" if len(self.errors) != 1 else "):"
        super().__init__("\n  - ".join([m] + self.errors))


class DisconnectedTopologyException(MMIntException):
    '''
    This exception is thrown whenever a spanning tree is requested \
    for a topology whose switches are not all reachable from the root.

    :param str root: The root switch.
    :param list[str] unreachable: The switches that cannot be reached.
    '''

    def __init__(self, root: str, unreachable: list):
        '''
        This exception is thrown whenever a spanning tree is requested \
        for a topology whose switches are not all reachable from the root.

        :param str root: The root switch.
        :param list[str] unreachable: The switches that cannot be reached.
        '''
        self.unreachable = sorted(unreachable)
        super().__init__(f"Switches {', '.join(self.unreachable)} are not" +
            f" reachable from root \"{root}\".")


class ProbeParseException(MMIntException):
    '''
    This exception is thrown whenever a byte string cannot be \
    parsed as a probe.

    :param str message: The reason why parsing failed.
    :param int offset: The byte offset at which the problem was detected.
    '''

    def __init__(self, message: str, offset: int):
        '''
        This exception is thrown whenever a byte string cannot be \
        parsed as a probe.

        :param str message: The reason why parsing failed.
        :param int offset: The byte offset at which the problem was detected.
        '''
        self.offset = offset
        super().__init__(f"{message} (at offset {offset}).")


class ConfigException(MMIntException):
    '''
    This exception is thrown whenever an experiment configuration is invalid.

    :param list[str] errors: One diagnostic per problem.
    '''

    def __init__(self, errors: list):
        '''
        This exception is thrown whenever an experiment configuration is invalid.

        :param list[str] errors: One diagnostic per problem.
        '''
        self.errors = list(errors)
        super().__init__("\n  - ".join(["Invalid experiment configuration:"] + self.errors))


class SimulationInvariantException(MMIntException):
    '''
    This exception is thrown by checked simulation runs whenever a queue \
    violates packet conservation.

    :param str where: The queue in which the violation was detected.
    :param float now: The simulation time in microseconds.
    '''

    def __init__(self, where: str, now: float):
        '''
        This exception is thrown by checked simulation runs whenever a queue \
        violates packet conservation.

        :param str where: The queue in which the violation was detected.
        :param float now: The simulation time in microseconds.
        '''
        super().__init__(f"Packet conservation violated at {where} (t={now:.3f}us).")
