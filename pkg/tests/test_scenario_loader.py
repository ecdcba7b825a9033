import copy
import json

import pytest

from src.errors import DanglingReference, SchemaError
from src.models.runtime import CouplingClass
from src.sim.scenario_loader import load_scenario, resolve_scenario_path
from src.utils.config_loader import SCENARIO_DIR


@pytest.fixture
def corridor_document():
    return json.loads((SCENARIO_DIR / "corridor_cascade.json").read_text(encoding="utf-8"))


def test_corridor_fixture(corridor):
    assert corridor.agent_ids == ["E", "T", "S"]
    assert corridor.authorities == ["DEWA", "RTA", "Dubai Police"]
    assert corridor.regimes == {"NIS2": 1440, "GDPR": 4320}
    assert [e.time for e in corridor.events] == [0, 5, 10, 15, 25, 30, 45, 60, 120]
    t = corridor.agent("T")
    assert t.dependencies[0].coupling_class is CouplingClass.SAFETY_COUPLED
    assert corridor.agent("E").script[0].time == 75


def test_shipped_stem_resolves():
    assert resolve_scenario_path("dnsc_anomaly") == SCENARIO_DIR / "dnsc_anomaly.json"
    assert load_scenario("dnsc_anomaly").agent_ids == ["DNSC"]


def test_breach_debounce_from_scenario_config(corridor_document):
    corridor_document["config"] = {"consecutive_breach_k": 3}
    scenario = load_scenario(corridor_document)
    assert scenario.agent("E").envelope.consecutive_breach_k == 3


@pytest.mark.parametrize("mutate", [
    lambda d: d["events"][1].__setitem__("agents", ["X"]),
    lambda d: d["events"][1]["steps"][0].__setitem__("agent", "X"),
    lambda d: d["agents"][2]["dependencies"][0].__setitem__("resource", "metro_power"),
    lambda d: d["events"][4]["steps"][1]["params"]["zones"].__setitem__("jumeirah", 1),
    lambda d: d["events"][7]["steps"][0]["params"].__setitem__("zone", "jumeirah"),
    lambda d: d["agents"].append(copy.deepcopy(d["agents"][0])),
])
def test_dangling_references(corridor_document, mutate):
    mutate(corridor_document)
    with pytest.raises(DanglingReference):
        load_scenario(corridor_document)


def test_unsorted_events_rejected(corridor_document):
    corridor_document["events"][1]["time"] = 50
    with pytest.raises(SchemaError):
        load_scenario(corridor_document)


def test_zone_shares_must_sum_to_one(corridor_document):
    corridor_document["zones"][0]["baseline_share"] = 0.2
    with pytest.raises(SchemaError):
        load_scenario(corridor_document)


def test_inverted_envelope_rejected(corridor_document):
    corridor_document["agents"][1]["envelope"]["metrics"]["cross_street_queue"] = {"min": 50, "max": 40}
    with pytest.raises(SchemaError):
        load_scenario(corridor_document)


def test_unknown_step_kind_rejected(corridor_document):
    corridor_document["events"][0]["steps"][0]["kind"] = "teleport"
    with pytest.raises(SchemaError):
        load_scenario(corridor_document)
