"""Python interface to the regtrace verifier."""

import json

from . import _core
from ._core import NoSatisfyingState, ProgramError, check_sat, derive, included, member

__all__ = [
    "NoSatisfyingState",
    "ProgramError",
    "check_sat",
    "derive",
    "included",
    "member",
    "oracle",
    "verify",
]


def verify(source, solver="internal", jobs=1, dump_all=False):
    """Verifies program text and returns the report as a dict."""
    return json.loads(_core.verify_json(source, solver, jobs, dump_all))


def oracle(source, entry="", runs=1000, seed=1, fuel=1000):
    """Runs the randomized oracle on program text and returns the report as a dict."""
    return json.loads(_core.oracle_json(source, entry, runs, seed, fuel))
