"""Hamilton-Jacobi verification for Maxwell fields.

Each command takes scenario keys as keyword arguments (the same keys as the
scenario file) or a complete scenario text, and returns the decoded JSON
report with the exit code under ``"exit_code"``.
"""

import json

from ._core import Error, ScalarExpr, ddw_residual, schema
from ._core import run as _run

__all__ = [
    "Error",
    "ScalarExpr",
    "audit",
    "convergence",
    "ddw_residual",
    "evolve",
    "report",
    "scenario_text",
    "schema",
    "verify_ddw",
]


def scenario_text(**keys):
    lines = []
    for key, value in keys.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _command(name, text, keys):
    if text is None:
        text = scenario_text(**keys)
    elif keys:
        raise TypeError("pass either a scenario text or keyword keys, not both")
    code, body = _run(name, text)
    result = json.loads(body)
    result["exit_code"] = code
    return result


def verify_ddw(text=None, **keys):
    return _command("verify-ddw", text, keys)


def audit(text=None, **keys):
    return _command("audit", text, keys)


def evolve(text=None, **keys):
    return _command("evolve", text, keys)


def convergence(text=None, **keys):
    return _command("convergence", text, keys)


def report(text=None, **keys):
    return _command("report", text, keys)
