"""
Unit tests for configuration loading, validation and environment overrides.
"""

import copy
import os

import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from src import utils


class TestToolkitConfig:
    """The shipped configuration and its validation rules."""

    @pytest.fixture
    def config(self):
        """Load config/segalkit.yaml as plain data."""
        with open(utils.DEFAULT_CONFIG_PATH, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f)

    def test_default_config_is_valid(self, config):
        utils.validate_toolkit_config(config)
        assert config['seed'] == 20240611

    def test_every_required_key_present(self, config):
        for section, keys in utils.REQUIRED_SECTIONS.items():
            for key in keys:
                assert key in config[section], f"config missing '{section}.{key}'"

    def test_a6_bound_within_corpus(self, config):
        assert 0 < config['corpus']['a6_max_arrows'] <= config['corpus']['max_arrows']

    def test_missing_section_rejected(self, config):
        del config['oracle']
        with pytest.raises(ValueError, match="Missing 'oracle'"):
            utils.validate_toolkit_config(config)

    @given(st.sampled_from(utils.REQUIRED_SECTIONS['budgets']), st.integers(max_value=0))
    def test_non_positive_budget_rejected(self, key, value):
        with open(utils.DEFAULT_CONFIG_PATH, 'r', encoding='utf-8') as f:
            config = copy.deepcopy(yaml.safe_load(f))
        config['budgets'][key] = value
        with pytest.raises(ValueError):
            utils.validate_toolkit_config(config)

    def test_non_mapping_rejected(self):
        with pytest.raises(ValueError):
            utils.validate_toolkit_config(['budgets'])


class TestOverrides:
    """Path and seed overrides from the environment."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            utils.load_toolkit_config(str(tmp_path / 'absent.yaml'))

    def test_config_path_from_environment(self, tmp_path, monkeypatch):
        with open(utils.DEFAULT_CONFIG_PATH, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
        config['seed'] = 99
        path = tmp_path / 'other.yaml'
        path.write_text(yaml.safe_dump(config), encoding='utf-8')
        monkeypatch.setenv('SEGALKIT_CONFIG', str(path))
        monkeypatch.delenv('SEGALKIT_SEED', raising=False)
        assert utils.load_toolkit_config()['seed'] == 99

    def test_seed_override(self, monkeypatch):
        monkeypatch.setenv('SEGALKIT_SEED', '7')
        assert utils.load_toolkit_config(utils.DEFAULT_CONFIG_PATH)['seed'] == 7

    def test_config_path_is_relative_to_package(self):
        assert not os.path.isabs(os.path.relpath(utils.DEFAULT_CONFIG_PATH, os.path.dirname(utils.__file__)))
        assert os.path.exists(utils.DEFAULT_CONFIG_PATH)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
