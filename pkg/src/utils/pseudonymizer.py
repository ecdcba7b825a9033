#!/usr/bin/env python3
"""
Pseudonymizer - Keyed deterministic token substitution for subject-identifying payloads
"""

import hashlib
import hmac
from typing import Any, Dict, Iterable

PSEUDONYM_PREFIX = "pn:"
MARKER = "_pseudonymized"

# Payload keys kept in clear inside a subject-identifying payload; every other value is hashed
NON_IDENTIFYING_FIELDS = frozenset({"decision", "zone", "held", "timestamp", "signal_phase"})


def is_identifying(field: str, keep: Iterable[str] = NON_IDENTIFYING_FIELDS) -> bool:
    return field not in keep


class Pseudonymizer:
    """Same key and token always give the same pseudonym; the key never enters the trail"""

    def __init__(self, key: str, keep: Iterable[str] = NON_IDENTIFYING_FIELDS):
        self._key = key.encode('utf-8')
        self.keep = frozenset(keep)

    def token(self, value: Any) -> str:
        digest = hmac.new(self._key, str(value).encode('utf-8'), hashlib.sha256).hexdigest()
        return PSEUDONYM_PREFIX + digest[:16]

    def apply(self, payload: Dict[str, Any]) -> Dict[str, Any]:
        result = {}
        for key, value in payload.items():
            if isinstance(value, dict):
                result[key] = self.apply(value)
            elif value is None or not is_identifying(key, self.keep):
                result[key] = value
            else:
                result[key] = self.token(value)
        result[MARKER] = True
        return result

    @staticmethod
    def is_pseudonym(value: Any) -> bool:
        return isinstance(value, str) and value.startswith(PSEUDONYM_PREFIX)
