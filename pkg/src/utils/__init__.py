"""Utility modules for config loading, file handling and pseudonymization"""

from .config_loader import ConfigLoader, EngineConfig, load_engine_config
from .file_operations import FileOperations
from .pseudonymizer import Pseudonymizer

__all__ = ['ConfigLoader', 'EngineConfig', 'load_engine_config', 'FileOperations', 'Pseudonymizer']
