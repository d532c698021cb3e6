"""Tunable constants of the simulator and of the algorithm.

All constants are grouped in frozen dataclasses; the defaults are the
concrete instantiations of the asymptotic bounds. `PipelineConfig` bundles
them and is what the driver and the harness pass around.
"""

from dataclasses import dataclass, field, fields, replace
from enum import StrEnum
from typing import Any, Mapping

from congestcut.exceptions import ConfigError
from congestcut.mathutils import word_bits

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


class InterestMode(StrEnum):
    """How the potentially-interesting paths of a tree edge are found."""

    SAMPLED = "sampled"
    EXACT = "exact"


@dataclass(frozen=True)
class SimConfig:
    """Engine parameters."""

    c_msg: int = 32
    """message budget in words"""

    max_rounds: int = 10**7
    """rounds after which a phase is aborted; every phase is capped on its own,
    so the total over a run may exceed it"""

    seed: int = 0
    """root seed of every random stream"""

    def budget_bits(self, n: int) -> int:
        """Per-edge, per-round budget for an n-vertex network."""
        return self.c_msg * word_bits(n)


@dataclass(frozen=True)
class DecompositionConfig:
    """Fragment decomposition thresholds, in units of ceil(sqrt(n))."""

    c_f: int = 12
    """bound on fragment count, size and diameter"""

    size_low: int = 1
    """a vertex closes a component once its counter reaches this"""

    size_high: int = 5
    """above this a vertex splits its children into several components"""

    good_factor: int = 10
    """components below this size are left untouched"""


@dataclass(frozen=True)
class InterestConfig:
    """Sampling and interest parameters."""

    mode: InterestMode = InterestMode.SAMPLED
    """sampled cover sets, or exact cover values injected as an oracle step"""

    c_b: int = 24
    """counting-lemma constant: interesting paths per family <= c_b * log2 n"""

    repetition_factor: int = 1
    """repetitions per class iteration: repetition_factor * ceil(log2 n) ** 2"""

    retention_factor: int = 4
    """samples kept per edge: retention_factor * ceil(log2 n)"""

    threshold_divisor: int = 3
    """a bottom qualifies with at least ceil(S / threshold_divisor) samples"""

    id_exponent: int = 5
    """random unit identifiers are drawn from [n ** id_exponent]"""


@dataclass(frozen=True)
class DriverConfig:
    """Tree packing and sampling parameters."""

    trees_k: int | None = None
    """number of packed trees, max(3, ceil(log2^2.2 n)) when unset"""

    c_sample: float = 12.0
    """constant of the sampling probability c * ln^1.1 n / OPT"""

    brute_force_cap: int = 3
    """graphs with at most this many vertices skip the pipeline"""


@dataclass(frozen=True)
class BenchConfig:
    """Harness caps."""

    oracle_cap: int = 80
    """largest n for the exhaustive 2-respecting oracle"""

    sim_cap: int = 4096
    """largest n the harness simulates"""


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob of one run."""

    sim: SimConfig = field(default_factory=SimConfig)
    decomposition: DecompositionConfig = field(default_factory=DecompositionConfig)
    interest: InterestConfig = field(default_factory=InterestConfig)
    driver: DriverConfig = field(default_factory=DriverConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)

    @staticmethod
    def from_mapping(values: Mapping[str, Any]) -> "PipelineConfig":
        """Build a configuration from nested overrides.

        Args:
            values: mapping of section name (`sim`, `decomposition`,
                `interest`, `driver`, `bench`) to a mapping of field overrides.

        Returns:
            configuration with the overrides applied to the defaults.

        Raises:
            ConfigError: unknown section or field.
        """
        base = PipelineConfig()
        sections = {f.name: getattr(base, f.name) for f in fields(base)}
        updated: dict[str, Any] = {}
        for name, overrides in values.items():
            if name not in sections:
                raise ConfigError(f"unknown configuration section '{name}'")
            current = sections[name]
            known = {f.name for f in fields(current)}
            unknown = set(overrides) - known
            if unknown:
                raise ConfigError(
                    f"unknown field(s) {sorted(unknown)} in section '{name}'"
                )
            kwargs = dict(overrides)
            if name == "interest" and "mode" in kwargs:
                try:
                    kwargs["mode"] = InterestMode(kwargs["mode"])
                except ValueError as ex:
                    raise ConfigError(f"unknown interest mode {kwargs['mode']!r}") from ex
            updated[name] = replace(current, **kwargs)
        return replace(base, **updated)

    def with_overrides(
        self,
        seed: int | None = None,
        budget_words: int | None = None,
        trees_k: int | None = None,
        max_rounds: int | None = None,
    ) -> "PipelineConfig":
        """Apply the command-line overrides, ignoring the unset ones."""
        sim = self.sim
        if seed is not None:
            sim = replace(sim, seed=seed)
        if budget_words is not None:
            sim = replace(sim, c_msg=budget_words)
        if max_rounds is not None:
            sim = replace(sim, max_rounds=max_rounds)
        driver = self.driver if trees_k is None else replace(self.driver, trees_k=trees_k)
        return replace(self, sim=sim, driver=driver)
