"""Exception hierarchy.

Every computational error carries enough structure to be serialized into a
CLI report (see ``to_dict``).
"""


class HadquotError(Exception):
    """Base class for computational errors raised by the library."""

    def to_dict(self):
        d = {"type": type(self).__name__, "message": str(self)}
        d.update(self._fields())
        return d

    def _fields(self):
        return {}


class ZeroElement(HadquotError, ValueError):
    pass


class AllZero(HadquotError, ValueError):
    pass


class NotIntegral(HadquotError, ValueError):
    pass


class ZeroDenominatorCoefficient(HadquotError, ZeroDivisionError):
    def __init__(self, index):
        super().__init__(f"denominator coefficient {index} is zero")
        self.index = index

    def _fields(self):
        return {"index": self.index}


class NewtonFailure(HadquotError, ArithmeticError):
    pass


class ZeroBeta(HadquotError, ValueError):
    pass


class PrefixExhausted(HadquotError, IndexError):
    def __init__(self, index, length):
        super().__init__(f"literal prefix has {length} coefficients, index {index} requested")
        self.index = index
        self.length = length

    def _fields(self):
        return {"index": self.index, "length": self.length}


class ImproperRational(HadquotError, ValueError):
    pass


class NonSplitDenominator(HadquotError, ValueError):
    def __init__(self, factor):
        super().__init__(f"denominator does not split over the base field: factor {factor}")
        self.factor = factor

    def _fields(self):
        return {"factor": self.factor}


class NoDominantPole(HadquotError, ValueError):
    def __init__(self, tied):
        super().__init__(f"no unique dominant pole; tied bases {tied}")
        self.tied = tied

    def _fields(self):
        return {"tied": self.tied}


class NonSimpleDominantPole(HadquotError, ValueError):
    pass


class NotReducible(HadquotError, ValueError):
    def __init__(self, index):
        super().__init__(f"coefficient {index} is not integral at the place")
        self.index = index

    def _fields(self):
        return {"index": self.index}


class InsufficientPrefix(HadquotError, ValueError):
    pass


class NonIntegralData(HadquotError, ValueError):
    pass


class NoNonzeroTerm(HadquotError, ValueError):
    pass


class NonSimplePoles(HadquotError, ValueError):
    pass


class UnverifiedRelation(HadquotError, ValueError):
    def __init__(self, index):
        super().__init__(f"relation fails at coefficient {index}")
        self.index = index

    def _fields(self):
        return {"index": self.index}


class NoneFound(HadquotError):
    pass


class SpecSyntaxError(ValueError):
    """Malformed series-spec text. Not a computational error."""
