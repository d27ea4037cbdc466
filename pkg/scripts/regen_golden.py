"""Re-certify the golden end-to-end outputs under tests/fixtures/golden/expected.

Only run this after an intentional change to report contents; the test suite
compares fresh runs against these files byte for byte.
"""
import shutil
from pathlib import Path

from fundbench.cli import main

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "golden"


def golden_args(out_dir):
    return [
        "all",
        "--competitors", str(FIXTURE / "competitors.csv"),
        "--benchmarks", str(FIXTURE / "benchmarks.csv"),
        "--universe", str(FIXTURE / "universe.csv"),
        "--config", str(FIXTURE / "run.cfg"),
        "--out-dir", str(out_dir),
    ]


if __name__ == "__main__":
    out = FIXTURE / "expected"
    if out.exists():
        shutil.rmtree(out)
    raise SystemExit(main(golden_args(out)))
