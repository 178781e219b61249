"""Run the full inequality verification suite and walk one report in detail.

The batch harness reads a JSON experiment list, checks the weight hypotheses
for each theorem, computes both sides of the inequality, and emits a CSV
summary plus a JSON report with per-experiment diagnostics.  Pass/Fail is a
margin test; Inconclusive means the hypotheses failed or a solver gave up,
so the row says nothing about the theorem either way.
"""

import json
import tempfile
from pathlib import Path

from wittenlap import (
    ExperimentSpec,
    ShapeSpec,
    Theorem,
    builtin_profile,
    default_config_path,
    run_experiment,
    run_suite,
    space_form,
)


def single_experiment():
    # one Faber-Krahn check, by hand: Gaussian weight, off-center disk
    spec = ExperimentSpec(
        theorem=Theorem.FABER_KRAHN,
        model=space_form(0),
        profile=builtin_profile("quad_neg", 0.3),
        shape=ShapeSpec.parse("disk:0.3,0,0.7"),
        mesh_h=0.03,
    )
    rep = run_experiment(spec)
    print("single Faber-Krahn experiment")
    print(f"  shape        {spec.shape_label}")
    print(f"  lambda_1     {rep.lhs:.6f}")
    print(f"  ball value   {rep.rhs:.6f}")
    print(f"  margin       {rep.margin:+.4f}")
    print(f"  status       {rep.status}")
    print(f"  hypotheses   passed={rep.hypothesis_check.passed}")


def inadmissible_weight():
    # the Neumann comparison wants a convex non-increasing weight; a concave
    # one fails the check up front and the harness refuses to claim anything
    spec = ExperimentSpec(
        theorem=Theorem.SZEGO_WEINBERGER,
        model=space_form(0),
        profile=builtin_profile("quad_neg", 0.4),
        shape=ShapeSpec.parse("ellipse:0.7,0.4"),
        mesh_h=0.04,
    )
    rep = run_experiment(spec)
    print("\ninadmissible weight for the Neumann bound (phi = -0.4 t^2, concave)")
    print(f"  status       {rep.status}")
    print(f"  failed class {rep.hypothesis_check.failed.value}")
    print(f"  detail       {rep.hypothesis_check.detail}")


def full_suite():
    out = Path(tempfile.mkdtemp(prefix="wittenlap_reports_"))
    code = run_suite(default_config_path(), out)

    rows = (out / "summary.csv").read_text().strip().splitlines()
    report = json.loads((out / "report.json").read_text())
    by_status = {}
    for rep in report["experiments"]:
        by_status[rep["status"]] = by_status.get(rep["status"], 0) + 1

    print("\nfull suite from the default config")
    print(f"  experiments  {len(rows) - 1}")
    print(f"  status       {by_status}")
    print(f"  exit code    {code}   (0 ok, 2 failure, 3 inconclusive)")
    print(f"  reports in   {out}")

    worst = min(report["experiments"], key=lambda r: r["margin"])
    print("  tightest margin:")
    print(f"    {worst['theorem']}  kappa={worst['kappa']}  {worst['shape']}"
          f"  margin {worst['margin']:+.5f}")

    print("  first rows of summary.csv:")
    for line in rows[:5]:
        print(f"    {line}")


if __name__ == "__main__":
    single_experiment()
    inadmissible_weight()
    full_suite()
