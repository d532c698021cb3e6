# flake8: noqa F401, F403
from .engine import (
    EchoProgram,
    Message,
    Network,
    NodeContext,
    NodeProgram,
    message_words,
    run,
)
from .metrics import OracleStep, PhaseRecord, SimMetrics

__all__ = [
    "EchoProgram",
    "Message",
    "Network",
    "NodeContext",
    "NodeProgram",
    "message_words",
    "run",
    "OracleStep",
    "PhaseRecord",
    "SimMetrics",
]
