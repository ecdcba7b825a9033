#!/usr/bin/env python3
"""
Errors - Exception hierarchy shared by every manager
"""


class GovernanceError(Exception):
    """Base class for all control-plane errors"""


# Loading and integrity
class SchemaError(GovernanceError):
    """A file does not match its schema"""


class IntegrityError(GovernanceError):
    """Loaded data violates a catalog invariant"""


class DanglingReference(GovernanceError):
    """A scenario references an agent, zone or resource that does not exist"""


# Catalog lookups
class UnknownMeasure(GovernanceError):
    pass


class UnknownRule(GovernanceError):
    pass


# Agent layer
class UnregisteredAgent(GovernanceError):
    pass


class UnknownMetric(GovernanceError):
    pass


class DanglingCauseLink(GovernanceError):
    """An audit record cites a cause that is not in the trail"""


# Orchestration layer
class UnknownAgent(GovernanceError):
    pass


class DanglingResource(GovernanceError):
    """A declared dependency names a resource nobody provides"""


class EmptyRegimeSet(GovernanceError):
    pass


class SingleAuthority(GovernanceError):
    """Joint oversight needs at least two authorities"""


class UnknownRecord(GovernanceError):
    pass


class MissingContext(GovernanceError):
    """A conflict rule was dispatched without the inputs it needs"""


class OpenIncident(GovernanceError):
    """Consolidation was requested while the cascade is still active"""


# City layer
class DuplicateSystem(GovernanceError):
    pass


class UnknownSystem(GovernanceError):
    pass


class UnknownZone(GovernanceError):
    pass


class UnsupportedLanguage(GovernanceError):
    pass


# Reports
class UnknownFormat(GovernanceError):
    pass
