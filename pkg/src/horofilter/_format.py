"""Deterministic float formatting for CSV/JSON emitters.

repr() of a Python float is the shortest string that round-trips, which is
the stable, seed-reproducible representation the byte-identical-output
contracts need (numpy scalars repr differently, so convert first).
"""

from __future__ import annotations


def fmt_float(x) -> str:
    return repr(float(x))


def fmt_bool(x) -> str:
    if x is None:
        return ""
    return "true" if x else "false"
