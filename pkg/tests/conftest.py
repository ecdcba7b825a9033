"""Shared fixtures: shipped data files, fresh managers and loaded scenarios"""

import pytest

from src.managers import (AgentRuntimeManager, CalibrationManager, CatalogManager, CityManager,
                          OrchestrationManager)
from src.models.calibration import (AutonomyEvidence, DecisionScope, DomainCriticality,
                                    HumanInvolvement, SystemProfile)
from src.models.runtime import MetricBounds, OperatingEnvelope
from src.sim import SimulationEngine, load_scenario
from src.utils.config_loader import CONFIG_DIR, SCENARIO_DIR, load_engine_config


@pytest.fixture(scope="session")
def engine_config():
    return load_engine_config()


@pytest.fixture(scope="session")
def catalog():
    return CatalogManager.from_file()


@pytest.fixture(scope="session")
def calibration():
    return CalibrationManager.from_file()


@pytest.fixture(scope="session")
def engine(engine_config, catalog, calibration):
    return SimulationEngine(engine_config, catalog, calibration)


@pytest.fixture(scope="session")
def corridor():
    return load_scenario(SCENARIO_DIR / "corridor_cascade.json")


@pytest.fixture(scope="session")
def dnsc():
    return load_scenario(SCENARIO_DIR / "dnsc_anomaly.json")


@pytest.fixture
def runtime(engine_config, calibration):
    return AgentRuntimeManager(engine_config, calibration)


@pytest.fixture
def orchestration(engine_config, catalog, calibration, runtime):
    return OrchestrationManager(engine_config, catalog, calibration, runtime)


@pytest.fixture
def city(engine_config, calibration, runtime, orchestration):
    return CityManager(engine_config, calibration, runtime, orchestration)


@pytest.fixture
def registry_city(engine_config, calibration):
    manager = CityManager(engine_config, calibration)
    manager.load_registry(CONFIG_DIR / "uae_inventory.json")
    return manager


def make_profile(system_id, authority="DEWA", domain="Energy",
                 scope=DecisionScope.OPERATIONAL, involvement=HumanInvolvement.EXCEPTION_HANDLING,
                 criticality=DomainCriticality.PUBLIC_SPACE, endangers=False, cross_org=False,
                 multi_agent=False):
    evidence = AutonomyEvidence(scope, involvement, criticality)
    return SystemProfile(system_id, authority, domain, evidence, endangers, cross_org, multi_agent)


def g4_profile(system_id, authority="DEWA", domain="Energy"):
    return make_profile(system_id, authority, domain, DecisionScope.REAL_TIME_CONTROL,
                        HumanInvolvement.SUPERVISORY_OVERRIDE, DomainCriticality.CRITICAL_INFRASTRUCTURE,
                        endangers=True, cross_org=True)


def envelope(**metrics):
    """envelope(voltage=(0.95, 1.05, True), load=(0, 0.9))"""
    return OperatingEnvelope({
        name: MetricBounds(float(spec[0]), float(spec[1]), bool(spec[2]) if len(spec) > 2 else False)
        for name, spec in metrics.items()
    })
