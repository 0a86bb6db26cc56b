"""Exception hierarchy shared across the package.

Everything user-facing derives from HorofilterError so the CLI and the
service can map domain failures to a single exit code / HTTP status.
"""


class HorofilterError(Exception):
    """Base class for all domain errors raised by this package."""


class EdgeListError(HorofilterError):
    """Malformed edge-list input (bad token, self-loop, out-of-range id)."""


class DisconnectedGraphError(HorofilterError):
    """Graph is disconnected where connectivity is required."""


class SizeCapError(HorofilterError):
    """An O(n^2) computation was requested above its configured vertex cap."""
