"""Run every config in configs/ (or the ones given) and write CSVs under results/<name>/."""

import argparse
import sys
import time
from pathlib import Path

from er_lab.experiments import ExperimentConfig, run_experiment

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("configs", nargs="*", type=Path, help="defaults to configs/*.json")
    ap.add_argument("--out-root", type=Path, default=ROOT / "results")
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args(argv)

    paths = args.configs or sorted((ROOT / "configs").glob("*.json"))
    any_failed = False
    for path in paths:
        cfg = ExperimentConfig.from_json(path)
        start = time.perf_counter()
        rep = run_experiment(cfg, workers=args.workers)
        out = args.out_root / path.stem
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.csv").write_text(rep.report_csv(), newline="\n")
        (out / "trials.csv").write_text(rep.trials_csv(), newline="\n")
        print(f"== {path.stem} ({cfg.regime}, n={cfg.n}, C={cfg.C}, T={cfg.trials}) "
              f"{time.perf_counter() - start:.1f}s")
        print(rep.report_csv(), end="")
        any_failed |= rep.failed
    return 2 if any_failed else 0


if __name__ == "__main__":
    sys.exit(main())
