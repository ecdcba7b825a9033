"""Govctl - Layered governance control plane and scenario simulator for smart-city AI agents"""

__version__ = "1.0.0"
