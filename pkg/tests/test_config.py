from pytest import mark, raises

from congestcut.config import InterestMode, PipelineConfig, SimConfig
from congestcut.exceptions import ConfigError


class TestPipelineConfig:
    def test_defaults(self):
        config = PipelineConfig()
        assert config.interest.mode is InterestMode.SAMPLED
        assert config.decomposition.c_f == 12
        assert config.driver.trees_k is None
        assert config.bench.oracle_cap == 80

    def test_from_mapping(self):
        config = PipelineConfig.from_mapping(
            {"interest": {"mode": "exact", "c_b": 8}, "sim": {"c_msg": 4}}
        )
        assert config.interest.mode is InterestMode.EXACT
        assert config.interest.c_b == 8
        assert config.interest.retention_factor == 4
        assert config.interest.repetition_factor == 1
        assert config.sim.c_msg == 4
        assert config.driver == PipelineConfig().driver

    @mark.parametrize(
        "values",
        [
            {"network": {}},
            {"sim": {"budget": 3}},
            {"interest": {"mode": "lucky"}},
        ],
    )
    def test_errors(self, values):
        with raises(ConfigError):
            PipelineConfig.from_mapping(values)

    def test_overrides(self):
        config = PipelineConfig().with_overrides(seed=9, budget_words=2, trees_k=3)
        assert (config.sim.seed, config.sim.c_msg, config.driver.trees_k) == (9, 2, 3)
        assert config.sim.max_rounds == SimConfig().max_rounds

    def test_unset_overrides_keep_values(self):
        config = PipelineConfig.from_mapping({"sim": {"seed": 4}})
        assert config.with_overrides() == config


class TestSimConfig:
    @mark.parametrize("c_msg, n, bits", [(32, 7, 96), (1, 8, 4), (2, 1, 2)])
    def test_budget_bits(self, c_msg, n, bits):
        assert SimConfig(c_msg=c_msg).budget_bits(n) == bits
