"""Manager modules, one per governance layer plus catalog, calibration and run mode"""

from .catalog_manager import CatalogManager
from .calibration_manager import CalibrationManager
from .agent_runtime_manager import AgentRuntimeManager
from .orchestration_manager import OrchestrationManager
from .city_manager import CityManager
from .mode_manager import ModeManager

__all__ = ['CatalogManager', 'CalibrationManager', 'AgentRuntimeManager',
           'OrchestrationManager', 'CityManager', 'ModeManager']
