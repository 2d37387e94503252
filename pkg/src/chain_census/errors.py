"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ChainCensusError(Exception):
    """Base class for all errors raised by chain_census."""


class SizeGuard(ChainCensusError):
    """A computation would exceed its configured enumeration or memory budget."""


class SkewInput(ChainCensusError):
    pass


class DegenerateInput(ChainCensusError):
    pass


class DuplicatePoint(ChainCensusError):
    pass


class ExhaustedSampling(ChainCensusError):
    pass


class MalformedFile(ChainCensusError):
    pass


class MalformedNesting(ChainCensusError):
    pass


class MissingAudit(ChainCensusError):
    pass


class PlanInvalid(ChainCensusError):
    pass


class InsufficientData(ChainCensusError):
    pass
