"""
Govctl - setuptools setup script

DEVELOPMENT SETUP:
1. Create venv: python3 -m venv venv
2. Activate: source venv/bin/activate
3. Install deps: pip install -r requirements.txt
4. Run: python3 govctl.py run --scenario corridor_cascade --summary

INSTALL:
- pip install -e .
- govctl --help
"""

from setuptools import find_packages, setup

setup(
    name='govctl',
    version='1.0.0',
    description='Layered governance control plane and scenario simulator for smart-city AI agents',
    packages=find_packages(include=['src', 'src.*']),
    py_modules=['govctl'],
    include_package_data=True,
    data_files=[
        ('config', ['config/control_catalog.json', 'config/autonomy_decision_table.json',
                    'config/uae_inventory.json', 'config/engine_config.json']),
        ('config/schemas', ['config/schemas/control_catalog.schema.json',
                            'config/schemas/autonomy_decision_table.schema.json',
                            'config/schemas/uae_inventory.schema.json',
                            'config/schemas/engine_config.schema.json',
                            'config/schemas/scenario.schema.json']),
        ('scenarios', ['scenarios/corridor_cascade.json', 'scenarios/dnsc_anomaly.json']),
        ('scenarios/golden', ['scenarios/golden/corridor_cascade.trace.tsv',
                              'scenarios/golden/dnsc_anomaly.trace.tsv']),
    ],
    python_requires='>=3.8',
    install_requires=['numpy>=1.24.0', 'networkx>=3.1', 'jsonschema>=4.17.0', 'tqdm>=4.65.0'],
    extras_require={'test': ['pytest>=7.4.0', 'hypothesis>=6.82.0']},
    entry_points={'console_scripts': ['govctl=src.main:main']},
)
