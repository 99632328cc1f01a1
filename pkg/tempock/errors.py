#!/usr/bin/python3
"""Exceptions raised across the toolchain.

Every error carries a human readable ``description`` and the process exit
``code`` the command line reports for it; ``name`` mirrors the field the HTTP
error handler serialises.
"""

EXIT_USAGE = 64
EXIT_INPUT = 65
EXIT_RUNTIME = 2


class TempockError(Exception):
    """Base class of every toolchain error"""

    code = EXIT_RUNTIME

    def __init__(self, description=None):
        self.description = description or self.__class__.__doc__ or ""
        super().__init__(self.description)

    @property
    def name(self):
        return type(self).__name__

    @property
    def is_input_error(self):
        return self.code == EXIT_INPUT

    def to_dict(self):
        return {"error": self.name, "message": self.description}


# input errors (exit 65)

class ParseError(TempockError):
    """Syntax error"""

    code = EXIT_INPUT

    def __init__(self, span, expected, found, description=None):
        self.span = span
        self.expected = list(expected)
        self.found = found
        if description is None:
            description = "{}: expected {}, found {}".format(
                span, " or ".join(self.expected), found)
        super().__init__(description)


class UnboundIntervalSymbol(ParseError):
    """Symbolic interval bound without a constant declaration"""

    def __init__(self, span, symbol):
        self.symbol = symbol
        super().__init__(span, ["integer constant"], symbol,
                         "{}: no constant named '{}' is declared".format(span, symbol))


class IllFormedProgram(TempockError):
    """The program violates well-formedness rules"""

    code = EXIT_INPUT

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class ResolutionError(TempockError):
    """An observable path does not resolve"""

    code = EXIT_INPUT


class UnknownInstance(ResolutionError):
    """No such instance in the root component"""


class UnknownPort(ResolutionError):
    """No such port on the instance"""


class UnknownState(ResolutionError):
    """No such state on the instance"""


class UnknownVariable(ResolutionError):
    """No such variable on the instance"""


class IllTypedPredicate(ResolutionError):
    """Value predicate is not a well-typed boolean expression"""


class InvalidTaskSpec(TempockError):
    """Task table entry violates its constraints"""

    code = EXIT_INPUT


class NotALibraryComponent(TempockError):
    """Instance is not a library component"""

    code = EXIT_INPUT


class PreconditionViolation(TempockError):
    """Generator called outside its domain"""

    code = EXIT_INPUT


class UnreadableInput(TempockError):
    """An input file cannot be read"""

    code = EXIT_INPUT


# run-time errors (exit 2)

class DomainOverflow(TempockError):
    """Transition unrolling exceeded its bound"""


class ValueOutOfDomain(TempockError):
    """An update left a variable's declared domain"""


class NotEnabled(TempockError):
    """Transition is not enabled in the given state"""


class NotFirable(TempockError):
    """Transition is not firable from the given class"""


class LimitExceeded(TempockError):
    """Exploration stopped on a limit"""

    def __init__(self, limit, graph=None, description=None):
        self.limit = limit
        self.graph = graph
        super().__init__(description or "exploration limit reached: {}".format(limit))


class HorizonExceeded(TempockError):
    """The discrete-time oracle hit its horizon"""


class GranularityMismatch(TempockError):
    """Interval bounds are not multiples of the oracle granularity"""

    def __init__(self, description, hint=None):
        self.hint = hint
        super().__init__(description)


class InfeasiblePath(TempockError):
    """Path constraints are unsatisfiable"""


class UnsupportedInterval(TempockError):
    """Pattern interval cannot be compiled into an observer"""

    code = EXIT_INPUT


class SizeExceeded(TempockError):
    """Automaton construction exceeded its node budget"""


# usage errors (exit 64)

class UsageError(TempockError):
    """Invalid command line"""

    code = EXIT_USAGE
