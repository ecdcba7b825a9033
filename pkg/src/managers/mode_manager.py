#!/usr/bin/env python3
"""
Mode Manager - Handles switching between governed and baseline simulation runs
"""

import logging

logger = logging.getLogger(__name__)

WITH_FRAMEWORK = "WithFramework"
BASELINE = "Baseline"


class ModeManager:
    """Manages the run mode and the state that depends on it"""

    MODES = (WITH_FRAMEWORK, BASELINE)

    def __init__(self, mode=WITH_FRAMEWORK):
        self.current_mode = WITH_FRAMEWORK
        self.switch_mode(mode)

    def switch_mode(self, new_mode):
        """Switch between WithFramework and Baseline modes"""
        if new_mode not in self.MODES:
            raise ValueError(f"Unknown mode {new_mode!r}, expected one of {', '.join(self.MODES)}")
        if new_mode == self.current_mode:
            return
        logger.info("Mode %s -> %s", self.current_mode, new_mode)
        self.current_mode = new_mode

    def get_current_mode(self):
        return self.current_mode

    @property
    def governance_enabled(self):
        """Baseline runs the same agent events with every governance mechanism switched off"""
        return self.current_mode == WITH_FRAMEWORK
