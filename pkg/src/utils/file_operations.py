#!/usr/bin/env python3
"""
File Operations - Utility functions for report files and path operations
"""

import hashlib
from pathlib import Path


class FileOperations:
    """Utility class for file operations"""

    @staticmethod
    def ensure_directory(directory_path):
        """Ensure directory exists, create if it doesn't"""
        directory = Path(directory_path)
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    @staticmethod
    def write_report(output_path, content):
        """Write a report as UTF-8 with LF line endings; returns (ok, path or error)"""
        try:
            output_path = Path(output_path)
            FileOperations.ensure_directory(output_path.parent)
            data = content.encode('utf-8') if isinstance(content, str) else content
            with open(output_path, 'wb') as f:
                f.write(data)
            return True, output_path
        except OSError as e:
            return False, str(e)

    @staticmethod
    def read_report(input_path):
        """Read a report back as text"""
        try:
            with open(input_path, 'rb') as f:
                return True, f.read().decode('utf-8')
        except OSError as e:
            return False, str(e)

    @staticmethod
    def digest(content):
        """SHA-256 of report bytes, used to compare runs"""
        data = content.encode('utf-8') if isinstance(content, str) else content
        return hashlib.sha256(data).hexdigest()

    @staticmethod
    def find_scenario_files(directory, suffix='.json'):
        """Find scenario fixtures in a directory, sorted by name"""
        directory = Path(directory)
        if not directory.exists():
            return []
        return sorted(p for p in directory.glob(f'*{suffix}') if p.is_file())

    @staticmethod
    def golden_path_for(scenario_path, golden_dir=None):
        """scenarios/x.json -> scenarios/golden/x.trace.tsv"""
        scenario_path = Path(scenario_path)
        golden_dir = Path(golden_dir) if golden_dir else scenario_path.parent / 'golden'
        return golden_dir / f"{scenario_path.stem}.trace.tsv"
