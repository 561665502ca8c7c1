"""Regenerate the small-sample golden CSVs in tests/data.

Run after an intentional change to the numerics; the diff of tests/data is
the review artifact.
"""

import dataclasses
from pathlib import Path

from cnoma_ihs import experiments

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"
GOLDEN_SAMPLES = 4096
GOLDEN_GRID_SAMPLES = 2048


def golden_spec(name):
    spec = experiments.load_preset(name)
    return dataclasses.replace(spec, n_samples=GOLDEN_SAMPLES, grid_samples=GOLDEN_GRID_SAMPLES)


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    for name in experiments.PRESETS:
        table = experiments.run_sweep(golden_spec(name))
        (DATA / f"golden_{name}.csv").write_text(experiments.to_csv(table))
        print("wrote", name)


if __name__ == "__main__":
    main()
