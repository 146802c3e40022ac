"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class BlockdiagError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(BlockdiagError):
    pass


class NotHermitian(BlockdiagError):
    pass


class NoConvergence(BlockdiagError):
    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class Singular(BlockdiagError):
    def __init__(self, message, sigma_min=None):
        super().__init__(message)
        self.sigma_min = sigma_min


class ParseError(BlockdiagError):
    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line


class NotUnimodular(BlockdiagError):
    pass


class GapViolation(BlockdiagError):
    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class NotAGraph(BlockdiagError):
    def __init__(self, message, sigma_min=None):
        super().__init__(message)
        self.sigma_min = sigma_min


class RankMismatch(BlockdiagError):
    pass


class SpectraOverlap(BlockdiagError):
    def __init__(self, message, sigma_min=None):
        super().__init__(message)
        self.sigma_min = sigma_min


class ZeroLambda(BlockdiagError):
    pass


class BadPair(BlockdiagError):
    pass


class BadParams(BlockdiagError):
    pass
