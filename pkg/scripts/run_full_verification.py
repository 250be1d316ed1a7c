#!/usr/bin/env python3
"""Run the complete reconciliation suite and print a scoreboard.

Runs the default verification suite (closed-form vs mixture agreement,
Monte-Carlo goodness of fit, conditional characteristic function, Caputo
eigenfunction, telegraph PDE and generating-function ODE residuals),
then the negative controls, which are deliberately broken configurations
that must FAIL for the suite to have any teeth.

Writes ``verification_report.json`` and ``negative_controls.json`` to
--out-dir and exits 0 only if every positive check passes and every
negative control fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from fracmotion.verify import run_default_suite, run_negative_controls


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=20260815)
    parser.add_argument("--samples", type=int, default=100_000,
                        help="Monte-Carlo sample count per sampled check")
    parser.add_argument("--out-dir", type=Path, default=Path("."),
                        help="where the two report JSON files go")
    parser.add_argument("--skip-negative", action="store_true",
                        help="only run the positive suite")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    report = run_default_suite(seed=args.seed, n_samples=args.samples)
    (args.out_dir / "verification_report.json").write_text(report.to_json() + "\n")
    print("positive checks")
    for check in report.checks:
        verdict = "PASS" if check.passed else "FAIL"
        print(f"  {verdict}  {check.name:45s} statistic={check.statistic:.4g} "
              f"tolerance={check.tolerance:.4g}")
    ok = report.all_passed

    if not args.skip_negative:
        negatives = run_negative_controls(seed=args.seed, n_samples=args.samples)
        (args.out_dir / "negative_controls.json").write_text(negatives.to_json() + "\n")
        print("negative controls (these must fail)")
        for check in negatives.checks:
            verdict = "FAIL" if not check.passed else "UNEXPECTED PASS"
            print(f"  {verdict}  {check.name:45s} statistic={check.statistic:.4g} "
                  f"tolerance={check.tolerance:.4g}")
        ok = ok and not any(check.passed for check in negatives.checks)

    print("suite result:", "OK" if ok else "NOT OK")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
