#!/usr/bin/env python3
"""
Check Determinism - Run every fixture several times and compare trace digests
"""

import sys

from tqdm import tqdm

from src.main import GovernanceControlPlane
from src.sim.trace import emit_trace
from src.utils.config_loader import SCENARIO_DIR
from src.utils.file_operations import FileOperations


def check_determinism(runs=5, scenario_dir=SCENARIO_DIR):
    """Map of scenario name to the set of distinct trace digests seen"""
    plane = GovernanceControlPlane()
    digests = {}
    scenario_files = FileOperations.find_scenario_files(scenario_dir)
    with tqdm(total=runs * len(scenario_files), desc="Runs") as pbar:
        for path in scenario_files:
            scenario = plane.load_scenario(path)
            seen = set()
            for _ in range(runs):
                seen.add(FileOperations.digest(emit_trace(plane.engine.run(scenario), "tsv")))
                pbar.update(1)
            digests[scenario.name] = seen
    return digests


if __name__ == "__main__":
    runs = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    results = check_determinism(runs)
    unstable = [name for name, seen in results.items() if len(seen) != 1]
    for name, seen in sorted(results.items()):
        print(f"{name}: {len(seen)} distinct trace(s) over {runs} runs")
    sys.exit(1 if unstable else 0)
