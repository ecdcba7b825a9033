#!/usr/bin/env python3
"""
Regenerate Golden - Rewrite scenarios/golden/*.trace.tsv from the shipped fixtures
Review the diff by hand before committing; golden files are the acceptance reference.
"""

import sys
from pathlib import Path

from tqdm import tqdm

from src.main import GovernanceControlPlane
from src.sim.trace import emit_trace
from src.utils.config_loader import SCENARIO_DIR
from src.utils.file_operations import FileOperations


def regenerate(scenario_dir=SCENARIO_DIR, check_only=False):
    """Returns the scenarios whose trace differs from the golden file"""
    plane = GovernanceControlPlane()
    changed = []
    scenario_files = FileOperations.find_scenario_files(scenario_dir)
    for path in tqdm(scenario_files, desc="Scenarios"):
        data = emit_trace(plane.run(path), "tsv")
        golden = FileOperations.golden_path_for(path)
        ok, current = FileOperations.read_report(golden)
        if ok and current.encode('utf-8') == data:
            continue
        changed.append(path.stem)
        if not check_only:
            FileOperations.write_report(golden, data)
    return changed


if __name__ == "__main__":
    check_only = "--check" in sys.argv[1:]
    directory = next((a for a in sys.argv[1:] if not a.startswith("--")), SCENARIO_DIR)

    if not Path(directory).exists():
        print(f"Error: Directory {directory} not found")
        sys.exit(1)

    changed = regenerate(directory, check_only)
    if not changed:
        print("All golden traces up to date")
    else:
        verb = "Differs" if check_only else "Rewrote"
        for name in changed:
            print(f"{verb}: {name}")
    sys.exit(1 if check_only and changed else 0)
