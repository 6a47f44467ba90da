import os

import pytest

from byzlab.engine import enumerate_runs
from byzlab.oracle import InterpretedSystem
from byzlab.scenario import load_scenario

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "..", "scenarios")

SCENARIO_NAMES = sorted(
    name[:-5] for name in os.listdir(SCENARIO_DIR) if name.endswith(".json"))


def scenario_path(name: str) -> str:
    return os.path.join(SCENARIO_DIR, name + ".json")


@pytest.fixture(scope="session")
def suite():
    """name -> (scenario, runs, interpreted system), built once."""
    out = {}
    for name in SCENARIO_NAMES:
        sc = load_scenario(scenario_path(name), name=name)
        runs = enumerate_runs(sc.ctx)
        out[name] = (sc, runs, InterpretedSystem(
            runs, quiescent=sc.ctx.env.span <= sc.ctx.horizon))
    return out
