"""Exception types shared across the pipeline.

Every error carries an ``exit_code`` so the command line front end can map
failures to distinct process exit statuses.
"""

from __future__ import annotations


class RmtError(ValueError):
    exit_code = 1


class ParseError(RmtError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyUniverseError(RmtError):
    exit_code = 3


class InsufficientOverlapError(RmtError):
    exit_code = 4


class FillCapExceededError(RmtError):
    exit_code = 5

    def __init__(self, symbols: dict[str, float], cap: float):
        self.symbols = dict(symbols)
        self.cap = cap
        detail = ", ".join(f"{s} ({frac:.2%})" for s, frac in sorted(symbols.items()))
        super().__init__(f"forward-fill fraction above cap {cap:.2%}: {detail}")


class LagTooLargeError(RmtError):
    exit_code = 6


class ZeroVolatilityError(RmtError):
    exit_code = 7

    def __init__(self, symbols: list[str]):
        self.symbols = list(symbols)
        super().__init__("zero volatility for: " + ", ".join(self.symbols))


class NotNormalizedError(RmtError):
    exit_code = 8


class InvalidQError(RmtError):
    exit_code = 9


class NotSymmetricError(RmtError):
    exit_code = 10


class NoConvergenceError(RmtError):
    exit_code = 11


class IndexOutOfRangeError(RmtError, IndexError):
    exit_code = 12


class NsOutOfRangeError(RmtError):
    exit_code = 13


class CorrelationOutOfRangeError(RmtError):
    exit_code = 14


class InvalidDistanceMatrixError(RmtError):
    exit_code = 15


class WindowOutOfBoundsError(RmtError):
    exit_code = 16


class PanelTooShortError(RmtError):
    exit_code = 17


class InvalidSpecError(RmtError):
    exit_code = 18


class ConfigError(RmtError):
    exit_code = 19


#: exit status for filesystem failures (``OSError``) surfaced by the CLI
IO_EXIT_CODE = 20
