# flake8: noqa F401, F403
from .generators import GENERATORS, Generator, generate
from .oracles import brute_force_2respecting, stoer_wagner

__all__ = [
    "GENERATORS",
    "Generator",
    "generate",
    "brute_force_2respecting",
    "stoer_wagner",
]
