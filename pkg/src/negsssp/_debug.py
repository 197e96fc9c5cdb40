"""Opt-in auditing of every potential vector the library hands out.

Enabled by ``NEGSSSP_DEBUG=1`` in the environment or by :func:`enable`.
While enabled, each emitted potential is checked for validity against the
graph it was computed for; violations are counted and raised.
"""
import os
from collections import Counter

_state = {
    "enabled": os.environ.get("NEGSSSP_DEBUG", "") not in ("", "0"),
    "checks": 0,
    "violations": 0,
}
by_origin = Counter()


def enable(flag=True):
    _state["enabled"] = bool(flag)


def enabled():
    return _state["enabled"]


def stats():
    return {"checks": _state["checks"], "violations": _state["violations"],
            "by_origin": dict(by_origin)}


def reset():
    _state["checks"] = 0
    _state["violations"] = 0
    by_origin.clear()


def audit(graph, potentials, origin):
    """Check ``potentials`` against ``graph`` when auditing is on."""
    if not _state["enabled"]:
        return potentials
    from .graph import check_validity

    _state["checks"] += 1
    by_origin[origin] += 1
    if not check_validity(graph, potentials):
        _state["violations"] += 1
        raise AssertionError(f"invalid potentials emitted by {origin}")
    return potentials
