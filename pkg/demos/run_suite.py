"""Driving the checks from Python instead of the shell."""

import json

from torsionlab.checks import REGISTRY, run_check
from torsionlab.cli import run_suite

print(len(REGISTRY), "registered checks")

rep = run_check("lagrangian-count", {"p": 3, "r": 2})
print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))

config = {
    "checks": [
        {"check": "n-p-g", "params": {"p": [2, 3, 5], "g": [2, 3]}},
        {"check": "e11-named-form", "expect_status": "fail", "note": "known failure"},
    ]
}
agg = run_suite(config, jobs=2)
print(agg["total"], "checks;", agg["unexpected"], "unexpected;", agg["status_counts"])
