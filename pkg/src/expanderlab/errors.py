"""Exception hierarchy shared by all expanderlab modules."""


class ExpanderLabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ExpanderLabError, ValueError):
    """Bad user input; the CLI maps these to exit code 2."""


# field-core

class FieldMismatch(ValidationError):
    pass


class DivisionByZero(ExpanderLabError, ZeroDivisionError):
    pass


class NotPrime(ValidationError):
    pass


# exact-poly

class ArityMismatch(ValidationError):
    pass


class ZeroDenominator(ExpanderLabError, ZeroDivisionError):
    pass


class DenominatorNotInvertible(ExpanderLabError, ZeroDivisionError):
    def __init__(self, p, msg=None):
        self.p = p
        super().__init__(msg or f"coefficient denominator is divisible by p={p}")


class DuplicateNode(ValidationError):
    pass


class ZeroPolynomial(ValidationError):
    pass


class ConstantPolynomial(ValidationError):
    pass


# structure-classifier

class ProbeDegenerate(ExpanderLabError):
    pass


class SeparationFailed(ExpanderLabError):
    pass


class ImproperFraction(ValidationError):
    pass


# empirical modules

class BudgetExceeded(ExpanderLabError):
    """Work estimate above the configured budget; CLI exit code 3."""


class EmptySet(ValidationError):
    pass


class VertexOutOfRange(ValidationError):
    pass


class ConvergenceFailure(ExpanderLabError):
    pass


class DegreeTooLarge(ValidationError):
    pass


class TrivialCharacterProduct(ExpanderLabError):
    def __init__(self, magnitude, msg=None):
        self.magnitude = magnitude
        super().__init__(msg or "all character exponents are trivial; Weil bound not applicable")


class NotIrreducible(ValidationError):
    pass


class DegenerateInT(ValidationError):
    pass


# parser

class PolySyntaxError(ValidationError):
    def __init__(self, msg, span, src=None):
        self.span = span
        self.src = src
        super().__init__(msg)

    def __str__(self):
        start, end = self.span
        text = f"{self.args[0]} at {start}:{end}"
        if self.src is not None:
            text += "\n  " + self.src + "\n  " + " " * start + "^" * max(1, end - start)
        return text


class UnknownVariable(PolySyntaxError):
    def __init__(self, name, span, src=None):
        self.name = name
        super().__init__(f"unknown variable {name!r}", span, src)


class NegativeExponent(PolySyntaxError):
    def __init__(self, span, src=None):
        super().__init__("exponent must be a nonnegative integer", span, src)
