"""Run an experiment from a config string and read the report.

Equivalent to ``fpplab run lower_tail --config FILE --out DIR``.
"""
import json
import tempfile

from fpplab.experiments import REGISTRY, parse_config, run_experiment, write_report

CONFIG = """
[experiment]
name = lower_tail
replicas = 200
master_seed = 3

[params]
target = (16, 0)
eps_grid = 0.05, 0.1, 0.2, 0.5
"""

cfg = parse_config(CONFIG, REGISTRY)
rep = run_experiment(cfg)
print(rep.summary())
with tempfile.TemporaryDirectory() as out:
    entry = write_report(rep, out)
    print("\nmanifest entry:", json.dumps(entry, sort_keys=True))
