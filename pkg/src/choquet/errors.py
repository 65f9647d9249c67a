"""Exception hierarchy shared across the package."""


class ChoquetError(Exception):
    """Base class for all errors raised by this package."""


class UniverseMismatchError(ChoquetError):
    """Two values built over different ground sets were combined."""


class HypothesisError(ChoquetError):
    """An audit refused to run because the capacity lacks a required axiom.

    The message names the missing hypothesis; ``witness`` carries the axiom
    report that failed, when one exists.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PremiseError(ChoquetError):
    """Input data violates a stated premise (e.g. a domination bound)."""


class BudgetError(ChoquetError):
    """An enumeration or solver size guard was exceeded.

    ``size`` and ``budget`` report the offending numbers.
    """

    def __init__(self, message, size=None, budget=None):
        super().__init__(message)
        self.size = size
        self.budget = budget


class LoaderError(ChoquetError):
    """Malformed JSON input; the message localizes the offending path."""


class InvariantViolation(ChoquetError):
    """A theorem-level postcondition failed.

    This never indicates bad input: it means either the implementation or a
    verified mathematical identity is broken, and the CLI converts it into
    exit code 1 with a JSON witness.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload if payload is not None else {}
