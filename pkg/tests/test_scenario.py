import json
import math
from pathlib import Path

import pytest

from multistatic import ParseError, ValidationError, parse_scenario, scenario_from_dict, write_scenario
from multistatic.scenario import DEFAULT_SWEEP_VALUES

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def base_doc():
    return {
        "txs": [
            {"range_m": 50.0, "angle_deg": 0.0},
            {"range_m": 20.0, "angle_deg": 45.0},
            {"range_m": 25.0, "angle_deg": 135.0},
        ],
        "target": {"range_m": 50.0, "angle_deg": 90.0, "speed_mps": 20.0, "heading_deg": 90.0},
        "noise": {"sigma_br_m": 0.1, "sigma_brr_mps": 0.1, "sigma_doa_deg": 0.5},
    }


class TestParseScenario:
    def test_shipped_table1(self):
        sc = parse_scenario(SCENARIOS / "table1.json")
        assert sc.trials == 5000
        assert sc.seed == 0
        scene = sc.scene()
        assert scene.n_pairs == 3
        assert scene.tx(1).range_m == 50.0
        assert scene.tx(2).angle_rad == pytest.approx(math.radians(45.0))
        assert scene.tx(3).angle_rad == pytest.approx(math.radians(135.0))
        state = sc.target_state()
        assert state.position.range_m == 50.0
        assert state.velocity.speed_mps == 20.0
        spec = sc.trial_spec()
        assert spec.trials == 5000 and spec.master_seed == 0

    def test_defaults_applied(self):
        sc = scenario_from_dict(base_doc())
        assert sc.max_range_m == 1000.0
        assert sc.max_speed_mps == 100.0
        assert sc.trials == 5000
        assert sc.seed == 0
        assert sc.sweep is None

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            parse_scenario(tmp_path / "nope.json")

    def test_malformed_json_names_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"txs": [,]}')
        with pytest.raises(ParseError, match=r":1:"):
            parse_scenario(path)

    def test_negative_sigma_names_field(self):
        doc = base_doc()
        doc["noise"]["sigma_br_m"] = -0.1
        with pytest.raises(ValidationError, match=r"noise\.sigma_br_m"):
            scenario_from_dict(doc)

    def test_unknown_keys_rejected(self):
        doc = base_doc()
        doc["extra"] = 1
        with pytest.raises(ValidationError, match="extra"):
            scenario_from_dict(doc)
        doc = base_doc()
        doc["noise"]["sigma_x"] = 1.0
        with pytest.raises(ValidationError, match=r"noise\.sigma_x"):
            scenario_from_dict(doc)
        doc = base_doc()
        doc["txs"][0]["colour"] = "red"
        with pytest.raises(ValidationError, match=r"txs\[0\]\.colour"):
            scenario_from_dict(doc)

    def test_missing_sections(self):
        for key in ("txs", "target", "noise"):
            doc = base_doc()
            del doc[key]
            with pytest.raises(ValidationError, match=key):
                scenario_from_dict(doc)

    def test_angle_out_of_domain(self):
        doc = base_doc()
        doc["target"]["angle_deg"] = 190.0
        with pytest.raises(ValidationError, match=r"target\.angle_deg"):
            scenario_from_dict(doc)

    def test_tx_at_origin_rejected(self):
        doc = base_doc()
        doc["txs"][0]["range_m"] = 0.0
        with pytest.raises(ValidationError, match=r"txs\[0\]\.range_m"):
            scenario_from_dict(doc)

    def test_target_outside_bounds(self):
        doc = base_doc()
        doc["bounds"] = {"max_range_m": 40.0}
        with pytest.raises(ValidationError, match=r"target\.range_m"):
            scenario_from_dict(doc)

    def test_trials_must_be_integer(self):
        doc = base_doc()
        doc["trials"] = 3.5
        with pytest.raises(ValidationError, match="trials"):
            scenario_from_dict(doc)
        doc["trials"] = True
        with pytest.raises(ValidationError, match="trials"):
            scenario_from_dict(doc)
        doc["trials"] = 0
        with pytest.raises(ValidationError, match="trials"):
            scenario_from_dict(doc)

    def test_seed_fits_64_bits(self):
        doc = base_doc()
        doc["seed"] = 2**64
        with pytest.raises(ValidationError, match="seed"):
            scenario_from_dict(doc)


class TestSweepSection:
    def test_channel_only_gets_default_grid(self):
        doc = base_doc()
        doc["sweep"] = {"channel": "br"}
        sc = scenario_from_dict(doc)
        assert sc.sweep.values == DEFAULT_SWEEP_VALUES
        assert len(DEFAULT_SWEEP_VALUES) == 7
        assert DEFAULT_SWEEP_VALUES[0] == pytest.approx(0.1)
        assert DEFAULT_SWEEP_VALUES[-1] == pytest.approx(10.0)

    def test_bad_channel(self):
        doc = base_doc()
        doc["sweep"] = {"channel": "range"}
        with pytest.raises(ValidationError, match=r"sweep\.channel"):
            scenario_from_dict(doc)

    def test_bad_values(self):
        doc = base_doc()
        doc["sweep"] = {"channel": "br", "values": []}
        with pytest.raises(ValidationError, match=r"sweep\.values"):
            scenario_from_dict(doc)
        doc["sweep"] = {"channel": "br", "values": [1.0, 0.5]}
        with pytest.raises(ValidationError, match=r"sweep\.values"):
            scenario_from_dict(doc)
        doc["sweep"] = {"channel": "br", "values": [1.0, "two"]}
        with pytest.raises(ValidationError, match=r"sweep\.values\[1\]"):
            scenario_from_dict(doc)

    def test_sweep_spec_requires_section(self):
        sc = scenario_from_dict(base_doc())
        with pytest.raises(ValidationError, match="sweep"):
            sc.sweep_spec()


class TestRoundTrip:
    def test_write_then_parse_is_identity(self, tmp_path):
        doc = base_doc()
        doc["sweep"] = {"channel": "doa", "values": [0.25, 0.5, 1.0]}
        doc["trials"] = 123
        doc["seed"] = 42
        sc = scenario_from_dict(doc)
        path = tmp_path / "roundtrip.json"
        write_scenario(sc, path)
        assert parse_scenario(path) == sc

    def test_shipped_files_parse(self):
        for name in ("table1", "table1_single_tx", "fig4_br_sweep", "fig6_brr_sweep"):
            sc = parse_scenario(SCENARIOS / f"{name}.json")
            sc.scene()
            sc.target_state()


class TestDecodedTypes:
    def test_top_level_must_be_object(self, tmp_path):
        path = tmp_path / "arr.json"
        path.write_text(json.dumps([1, 2, 3]))
        with pytest.raises(ValidationError, match="top level"):
            parse_scenario(path)

    def test_txs_must_be_list(self):
        doc = base_doc()
        doc["txs"] = {}
        with pytest.raises(ValidationError, match="txs"):
            scenario_from_dict(doc)
