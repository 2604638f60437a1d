"""Exception hierarchy for the fairbandit package.

Each named error corresponds to one contract violation; all inherit from
FairBanditError so callers can catch the whole family at once.
"""

from __future__ import annotations


class FairBanditError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FairBanditError, ValueError):
    """Invalid fairness configuration."""


class ZeroArms(ConfigError):
    """The arm count is not a positive integer."""


class RateTooHigh(ConfigError):
    """num_arms * min_rate exceeds 1, so no feasible allocation exists."""


class NonIntegralBlock(ConfigError):
    """A positive min_rate whose reciprocal is not an integer."""


class InvalidSlots(ConfigError):
    """Slot set has the wrong size or contains out-of-range offsets."""


class NotBijective(ConfigError):
    """Slot-to-arm assignment is not a bijection onto the arm set."""


class ArmNeverPulled(FairBanditError):
    """An index was requested for an arm with zero pulls."""


class ArmOutOfRange(FairBanditError, IndexError):
    """Arm id outside 1..num_arms."""


class HorizonExceeded(FairBanditError):
    """A selection was requested after the final step of the horizon."""


class RewardOutOfRange(FairBanditError, ValueError):
    """Observed reward outside the [0, 1] range."""


class ZeroTurns(FairBanditError, ValueError):
    """Teammate reward requested for a player with no turns."""


class WrongPolicy(FairBanditError):
    """A regret accounting was applied to a trace from the wrong policy."""


class EmptyInput(FairBanditError, ValueError):
    """An aggregation was requested over zero traces."""


class HorizonTooLarge(FairBanditError):
    """The brute-force oracle only handles tiny horizons."""


class SessionError(FairBanditError):
    """Base class for allocation-service session errors."""


class UnknownSession(SessionError):
    """No session with the given id."""


class SessionFinished(SessionError):
    """The session already played its full horizon."""


class WrongPlayer(SessionError):
    """A score was reported for a player other than the pending one."""


class NegativePoints(SessionError, ValueError):
    """Reported points must be nonnegative."""


class CorruptSnapshot(SessionError):
    """A session snapshot blob failed to parse or validate."""


def error_code(exc: Exception) -> str:
    """Machine-readable snake_case code for an exception, e.g. RateTooHigh -> rate_too_high."""
    name = type(exc).__name__
    out = [name[0].lower()]
    for ch in name[1:]:
        if ch.isupper():
            out.append("_")
            out.append(ch.lower())
        else:
            out.append(ch)
    return "".join(out)
