#!/usr/bin/env python3
"""
Govctl - Layered governance control plane for smart-city AI agents
Main application orchestrator
"""

import logging
import sys
from datetime import datetime
from typing import Optional, Sequence

from src.managers import CalibrationManager, CatalogManager, CityManager
from src.sim import SimulationEngine, load_scenario
from src.utils import ConfigLoader, EngineConfig, FileOperations, load_engine_config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level=logging.WARNING, log_file: Optional[str] = None):
    """Configure root logging once; log_file="auto" writes under logs/ with a timestamp"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        if log_file == "auto":
            logs_dir = FileOperations.ensure_directory("logs")
            log_file = logs_dir / f"govctl_{datetime.now().strftime('%m%d_%H%M')}.log"
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers)


class GovernanceControlPlane:
    """Main application class - wires the shipped catalog, decision table, registry and engine"""

    def __init__(self, config_path=None, catalog_path=None, table_path=None):
        self.loader = ConfigLoader()
        self.config: EngineConfig = load_engine_config(config_path, self.loader)
        self.catalog = CatalogManager.from_file(catalog_path, self.loader)
        self.calibration = CalibrationManager.from_file(table_path, self.loader)
        self.engine = SimulationEngine(self.config, self.catalog, self.calibration)
        self._city: Optional[CityManager] = None

    @property
    def city(self) -> CityManager:
        """Registry-only city manager, loaded on first use"""
        if self._city is None:
            self._city = CityManager(self.config, self.calibration)
            self._city.load_registry(loader=self.loader)
        return self._city

    def load_scenario(self, source):
        return load_scenario(source, self.loader, self.config.consecutive_breach_k)

    def run(self, source, mode="WithFramework"):
        scenario = self.load_scenario(source)
        return self.engine.run(scenario, mode)

    @property
    def last_run(self):
        return self.engine.last_run


def main(argv: Optional[Sequence[str]] = None) -> int:
    from src.ui.cli import run_cli
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
