"""Round and bandwidth accounting of simulation runs."""

from collections import namedtuple
from dataclasses import dataclass, field

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


OracleStep = namedtuple("OracleStep", "name charge")
OracleStep.__doc__ = """A centrally computed step with its analytic round charge."""


PhaseRecord = namedtuple("PhaseRecord", "name rounds messages")
PhaseRecord.__doc__ = """Rounds and messages of one simulated phase."""


@dataclass
class SimMetrics:
    """Ledger of everything a network has executed so far."""

    budget_bits: int = 0
    """per-edge, per-round bandwidth"""

    rounds_used: int = 0
    """simulated rounds over all phases"""

    messages_sent: int = 0
    """messages handed to the engine, dropped ones included"""

    max_bits_per_edge_round: int = 0
    """largest message seen on any directed edge in any round"""

    oracle_steps: list[OracleStep] = field(default_factory=list)
    """injected steps, in order"""

    phases: list[PhaseRecord] = field(default_factory=list)
    """simulated phases, in order"""

    @property
    def rounds_pure(self) -> int:
        """Rounds actually simulated."""
        return self.rounds_used

    @property
    def rounds_charged(self) -> int:
        """Simulated rounds plus the analytic charges of oracle steps."""
        return self.rounds_used + sum(s.charge for s in self.oracle_steps)

    @property
    def is_pure(self) -> bool:
        return not self.oracle_steps

    def add_phase(self, name: str, rounds: int, messages: int, max_bits: int) -> None:
        self.phases.append(PhaseRecord(name, rounds, messages))
        self.rounds_used += rounds
        self.messages_sent += messages
        self.max_bits_per_edge_round = max(self.max_bits_per_edge_round, max_bits)

    def merge(self, other: "SimMetrics") -> None:
        """Accumulate another ledger into this one."""
        self.budget_bits = max(self.budget_bits, other.budget_bits)
        self.rounds_used += other.rounds_used
        self.messages_sent += other.messages_sent
        self.max_bits_per_edge_round = max(
            self.max_bits_per_edge_round, other.max_bits_per_edge_round
        )
        self.oracle_steps.extend(other.oracle_steps)
        self.phases.extend(other.phases)

    def to_dict(self) -> dict:
        return {
            "budget_bits": self.budget_bits,
            "rounds_pure": self.rounds_pure,
            "rounds_charged": self.rounds_charged,
            "messages_sent": self.messages_sent,
            "max_bits_per_edge_round": self.max_bits_per_edge_round,
            "oracle_steps": [list(s) for s in self.oracle_steps],
            "phases": len(self.phases),
        }
