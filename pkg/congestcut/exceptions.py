"""Exceptions raised by the simulator, the algorithm phases and the harness.

Each of them signals a broken contract: an input that violates the graph
invariants, a program that oversteps the model, or an internal invariant of
the algorithm that failed at run time. None is used for ordinary control flow.
"""

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


class CongestCutException(Exception):
    """Base class for all congestcut exceptions."""

    def __init__(self, message: str):
        self.message = message

    def __str__(self) -> str:
        return self.message


class InvalidGraph(CongestCutException):
    """Graph or tree input that breaks the representation invariants."""


class ConfigError(CongestCutException):
    """Unknown or malformed configuration value."""


class BudgetExceeded(CongestCutException):
    """A node program tried to send a message above the per-edge budget."""


class RoundLimit(CongestCutException):
    """A simulation did not terminate within `max_rounds`."""


class IllegalInjection(CongestCutException):
    """An oracle step was injected while a round was executing."""


class DecompositionInvariantViolation(CongestCutException):
    """The fragment decomposition or the layering broke one of its invariants."""


class InterestBoundExceeded(CongestCutException):
    """A path is potentially interested in too many paths of one family."""


class PairingInvariantViolation(CongestCutException):
    """The super-highway pairing broke one of its properties."""


class PreconditionUnmet(CongestCutException):
    """A comparison routine was called without the knowledge it relies on."""


class RecursionDepthExceeded(CongestCutException):
    """A divide-and-conquer recursion went deeper than its logarithmic bound."""


class SizeCap(CongestCutException):
    """An exhaustive oracle was asked to run above its size cap."""
