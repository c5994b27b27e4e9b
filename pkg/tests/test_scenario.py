"""
Unit tests for common/services/scenario.py
"""
import json

import pytest

from common.helpers.exceptions import ConfigError
from common.models import IdsMode, ScenarioConfig, SimulationMode
from common.services.scenario import build_config, dump_config, load_config, write_reference

SCENARIO_TOML = """
seed = 11
horizon = 40
mode = "non-sectorized"

[field]
leader_count = 3
follower_count = 20

[[attackers]]
archetype = "WakeInjector"
start_epoch = 2
"""


class TestBuildConfig:
    """Tests for build_config."""

    def test_defaults(self):
        """Test that only the seed is required."""
        scenario = build_config({'seed': 4})

        assert scenario.horizon == 200
        assert scenario.mode is SimulationMode.SECTORIZED
        assert scenario.ids_mode is IdsMode.FULL
        assert scenario.attackers == []

    def test_missing_seed(self):
        """Test that a scenario without a seed is refused."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'horizon': 5})

        assert "seed: Field required" in str(exc_info.value)

    def test_seed_override(self):
        """Test that an explicit seed wins over the file's."""
        assert build_config({'seed': 4}, seed=9).seed == 9
        assert build_config({}, seed=9).seed == 9

    def test_unknown_key(self):
        """Test that misspelled keys are errors, not silently ignored."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'seed': 1, 'feild': {}})

        assert "feild" in str(exc_info.value)

    def test_negative_value_names_field(self):
        """Test that the error message carries the dotted path of the offending key."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'seed': 1, 'thresholds': {'t_per': -1}})

        assert str(exc_info.value).startswith("thresholds.t_per:")

    def test_attacker_must_be_follower(self):
        """Test that an attacker pinned to a leader id is refused."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'seed': 1, 'field': {'leader_count': 2, 'follower_count': 5},
                          'attackers': [{'archetype': 'Flooder', 'intensity': 8.0, 'node': 1}]})

        assert "is not a follower id (3..7)" in str(exc_info.value)

    def test_flooder_must_exceed_nominal_rate(self):
        """Test that a flooder no louder than a normal leaf is refused."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'seed': 1, 'attackers': [{'archetype': 'Flooder', 'intensity': 2.0}]})

        assert "must exceed the nominal per-slot rate" in str(exc_info.value)

    def test_flooder_burst_is_rounded_before_comparing(self):
        """Test that an intensity rounding down to the nominal rate is refused."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'seed': 1, 'attackers': [{'archetype': 'Flooder', 'intensity': 2.4}]})

        assert "must exceed the nominal per-slot rate 2.0" in str(exc_info.value)

    def test_flooder_uses_pinned_leaf_rate(self):
        """Test that a pinned flooder must exceed its own leaf's rate."""
        with pytest.raises(ConfigError):
            build_config({'seed': 1, 'field': {'leader_count': 2, 'follower_count': 5},
                          'traffic': {'per_leaf_rates': {'4': 5}},
                          'attackers': [{'archetype': 'Flooder', 'intensity': 3.0, 'node': 4}]})

        assert build_config({'seed': 1, 'attackers': [{'archetype': 'Flooder', 'intensity': 3.0}]}).attackers

    @pytest.mark.parametrize('intensity', [0.6, 1.0, 1.5])
    def test_spoofer_must_deviate(self, intensity):
        """Test that a spoofed residual within the energy jump tolerance is refused."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'seed': 1, 'attackers': [{'archetype': 'EnergySpoofer', 'intensity': intensity}]})

        assert "must differ from 1 by more than energy_jump_delta 0.5" in str(exc_info.value)

    def test_reward_below_penalty(self):
        """Test that a reward as large as the penalty is refused."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({'seed': 1, 'reputation': {'reward': 0.3, 'penalty': 0.05}})

        assert str(exc_info.value).startswith("reputation:")
        assert "must be smaller than penalty" in str(exc_info.value)
        with pytest.raises(ConfigError):
            build_config({'seed': 1, 'reputation': {'reward': 0.2, 'penalty': 0.2}})

    def test_heterogeneous_energy(self):
        """Test that leaders must start with more energy than followers."""
        with pytest.raises(ConfigError):
            build_config({'seed': 1, 'field': {'leader_energy': 5.0, 'follower_energy': 5.0}})

    def test_duty_cycle_fits_epoch(self):
        """Test that wake plus sleep cannot exceed the epoch."""
        with pytest.raises(ConfigError):
            build_config({'seed': 1, 'duty': {'epoch_length': 5.0, 'wake_duration': 1.0, 'sleep_duration': 4.5}})


class TestLoadConfig:
    """Tests for load_config."""

    def test_toml(self, tmp_path):
        """Test that a TOML scenario is parsed and defaults fill the gaps."""
        path = tmp_path / 'scenario.toml'
        path.write_text(SCENARIO_TOML)

        scenario = load_config(str(path))

        assert scenario.seed == 11
        assert scenario.mode is SimulationMode.NON_SECTORIZED
        assert scenario.field.follower_count == 20
        assert scenario.field.width == 100.0
        assert scenario.attackers[0].start_epoch == 2

    def test_json_matches_toml(self, tmp_path):
        """Test that the same scenario in JSON resolves identically."""
        toml_path = tmp_path / 'scenario.toml'
        toml_path.write_text(SCENARIO_TOML)
        json_path = tmp_path / 'scenario.json'
        json_path.write_text(json.dumps({
            'seed': 11, 'horizon': 40, 'mode': 'non-sectorized',
            'field': {'leader_count': 3, 'follower_count': 20},
            'attackers': [{'archetype': 'WakeInjector', 'start_epoch': 2}],
        }))

        assert load_config(str(json_path)) == load_config(str(toml_path))

    def test_seed_override(self, tmp_path):
        """Test that the command-line seed replaces the file's."""
        path = tmp_path / 'scenario.toml'
        path.write_text(SCENARIO_TOML)

        assert load_config(str(path), seed=3).seed == 3

    def test_unsupported_extension(self, tmp_path):
        """Test that only TOML and JSON are accepted."""
        path = tmp_path / 'scenario.yaml'
        path.write_text('seed: 1')

        with pytest.raises(ConfigError) as exc_info:
            load_config(str(path))

        assert "unsupported scenario format '.yaml'" in str(exc_info.value)

    def test_missing_file(self, tmp_path):
        """Test that an unreadable file is a configuration error."""
        with pytest.raises(ConfigError) as exc_info:
            load_config(str(tmp_path / 'absent.toml'))

        assert "cannot read scenario" in str(exc_info.value)

    def test_malformed_toml(self, tmp_path):
        """Test that a syntax error is reported against the file."""
        path = tmp_path / 'broken.toml'
        path.write_text('seed = = 1')

        with pytest.raises(ConfigError) as exc_info:
            load_config(str(path))

        assert str(path) in str(exc_info.value)

    def test_top_level_must_be_table(self, tmp_path):
        """Test that a JSON list is refused."""
        path = tmp_path / 'list.json'
        path.write_text('[1, 2]')

        with pytest.raises(ConfigError) as exc_info:
            load_config(str(path))

        assert "top level must be a table" in str(exc_info.value)


class TestReference:
    """Tests for dump_config and write_reference."""

    def test_dump_is_loadable(self):
        """Test that the resolved dump validates back to the same scenario."""
        scenario = build_config({'seed': 5, 'attackers': [{'archetype': 'EnergySpoofer', 'intensity': 3.0}]})

        assert ScenarioConfig.model_validate_json(dump_config(scenario)) == scenario

    def test_write_reference(self, tmp_path):
        """Test that the reference lists every section with its defaults."""
        path = tmp_path / 'reference.json'

        write_reference(str(path))

        reference = json.loads(path.read_text())
        assert set(reference) == {'schema', 'defaults'}
        assert reference['defaults']['seed'] == 0
        assert reference['defaults']['slots']['slot_capacity'] == 4
        assert 'thresholds' in reference['schema']['properties']
