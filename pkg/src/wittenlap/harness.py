"""Experiment orchestration: inequality suites over a configured corpus.

Five experiment families, one per verified statement:

  faber_krahn             lambda_1(Omega) >= lambda_1(B_R), |B_R| = |Omega|
  faber_krahn_hemisphere  the same on weighted hemisphere caps
  hong_krahn_szego        lambda_2(Omega) >= lambda_1(B at half volume)
  szego_weinberger        mu_1(Omega) <= mu_1(B_R), after Brouwer recentering
  appendix_ordering       mu_{1,1} < mu_{0,2} for the ball, over an R grid

Every run returns an InequalityReport with a signed margin normalized by
the ball side, so `Pass` is uniformly `margin >= -tolerance` (plus the
near-equality pinch on shapes that saturate the inequality).  Suites read a
JSON config and write a CSV summary (byte-identical across repeat runs) and
a JSON report carrying full diagnostics.
"""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    MeshError,
    QuadratureError,
)
from .fem2d import (
    KNOWN_SHAPES,
    ShapeSpec,
    domain_spectrum,
    generate_mesh,
    nodal_domain_count,
    recenter_for_zero_mean,
)
from .measure import mesh_weighted_volume, solve_radius
from .radial import (
    BoundaryCondition,
    first_dirichlet,
    first_neumann,
    trial_h,
    wronskian_residual,
)
from .spaceform import SpaceFormModel, s_kappa, space_form
from .weights import Admissibility, check_admissibility, parse_weight

__all__ = [
    "Theorem",
    "ExperimentSpec",
    "InequalityReport",
    "run_experiment",
    "run_faber_krahn",
    "run_faber_krahn_hemisphere",
    "run_hks",
    "run_szego_weinberger",
    "run_appendix_ordering",
    "run_suite",
    "load_config",
    "default_config_path",
]

WRONSKIAN_TOL = 1e-6
_DEFAULT_GRIDS = {1: (0.4, 0.8, 1.2), 0: (0.5, 1.0, 2.0), -1: (0.5, 1.0, 2.0)}


class Theorem(enum.Enum):
    FABER_KRAHN = "faber_krahn"
    FABER_KRAHN_HEMISPHERE = "faber_krahn_hemisphere"
    HONG_KRAHN_SZEGO = "hong_krahn_szego"
    SZEGO_WEINBERGER = "szego_weinberger"
    APPENDIX_ORDERING = "appendix_ordering"


_MESH_THEOREMS = {
    Theorem.FABER_KRAHN,
    Theorem.FABER_KRAHN_HEMISPHERE,
    Theorem.HONG_KRAHN_SZEGO,
    Theorem.SZEGO_WEINBERGER,
}


@dataclass(frozen=True)
class ExperimentSpec:
    theorem: Theorem
    model: SpaceFormModel
    profile: object              # WeightProfile
    shape: ShapeSpec | None
    mesh_h: float | None
    num_levels: int = 256
    tolerance: float = 0.02
    radius_grid: tuple | None = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        k = int(self.model.kappa)
        if self.theorem in _MESH_THEOREMS:
            if self.model.dimension != 2:
                raise ConfigError(f"{self.theorem.value} runs on 2-D domains only")
            if self.shape is None or self.mesh_h is None or self.mesh_h <= 0:
                raise ConfigError(
                    f"{self.theorem.value} needs a shape and a positive mesh_h"
                )
        if self.theorem == Theorem.FABER_KRAHN_HEMISPHERE:
            if k != 1:
                raise ConfigError("hemisphere experiments require kappa = +1")
            if not self.profile.label.startswith("log_cos"):
                raise ConfigError("hemisphere experiments require the log_cos weight")
            if self.shape.name != "disk":
                raise ConfigError(
                    "hemisphere domains are geodesic caps: use a disk shape"
                )
        elif self.theorem in _MESH_THEOREMS and k == 1:
            raise ConfigError(
                f"kappa = +1 with {self.theorem.value}: use faber_krahn_hemisphere"
            )
        if self.theorem == Theorem.SZEGO_WEINBERGER and k not in (0, -1):
            raise ConfigError("szego_weinberger covers kappa in {0, -1} only")

    @property
    def shape_label(self) -> str:
        return str(self.shape) if self.shape is not None else "ball"

    def sort_key(self):
        return (
            self.theorem.value,
            int(self.model.kappa),
            self.profile.label,
            self.shape_label,
        )


@dataclass
class InequalityReport:
    spec: ExperimentSpec
    lhs: float
    rhs: float
    margin: float
    hypothesis_check: object     # AdmissibilityVerdict or None
    status: str                  # Pass | Fail | Inconclusive
    runtime_ms: int
    diagnostics: dict = field(default_factory=dict)

    def csv_row(self) -> str:
        s = self.spec
        fields = [
            s.theorem.value,
            str(int(s.model.kappa)),
            s.profile.label,
            s.shape_label,
            repr(float(self.lhs)),
            repr(float(self.rhs)),
            repr(float(self.margin)),
            self.status,
        ]
        # shape labels carry commas (disk:0,0,1): minimal RFC-4180 quoting
        return ",".join(
            f'"{f}"' if ("," in f or '"' in f) else f for f in fields
        )

    def to_json_dict(self) -> dict:
        s = self.spec
        hc = self.hypothesis_check
        return {
            "theorem": s.theorem.value,
            "kappa": int(s.model.kappa),
            "dim": s.model.dimension,
            "weight": s.profile.label,
            "shape": s.shape_label,
            "mesh_h": s.mesh_h,
            "num_levels": s.num_levels,
            "tolerance": s.tolerance,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "hypothesis_check": None
            if hc is None
            else {
                "passed": bool(hc),
                "failed": None if hc.failed is None else hc.failed.value,
                "detail": hc.detail,
            },
            "status": self.status,
            "runtime_ms": self.runtime_ms,
            "diagnostics": self.diagnostics,
        }


# ---------------------------------------------------------------------------
# hypothesis classes per theorem


def _required_classes(theorem: Theorem, kappa: int) -> list:
    A = Admissibility
    if theorem in (Theorem.FABER_KRAHN, Theorem.HONG_KRAHN_SZEGO):
        if kappa == -1:
            return [A.STRICTLY_CONCAVE, A.NON_INCREASING]
        return [A.CONCAVE, A.NON_INCREASING]
    if theorem == Theorem.FABER_KRAHN_HEMISPHERE:
        return [A.LOG_COS_HEMISPHERE]
    # Szego-Weinberger and the Neumann mode ordering share one class away
    # from the sphere; on the hemisphere the admissible weight is exactly
    # -log cos t (its own statement), which is increasing, not non-increasing
    if theorem == Theorem.APPENDIX_ORDERING and kappa == 1:
        return [A.LOG_COS_HEMISPHERE]
    return [A.NON_INCREASING, A.CONVEX]


def _hypothesis_verdict(spec: ExperimentSpec, t_max: float):
    kappa = int(spec.model.kappa)
    t_cap = min(t_max, spec.profile.domain_sup * (1.0 - 1e-9))
    primary = check_admissibility(
        spec.profile,
        _required_classes(spec.theorem, kappa),
        t_max=t_cap,
        dim=spec.model.dimension,
    )
    if primary or kappa != 0:
        return primary
    if spec.theorem in (Theorem.FABER_KRAHN, Theorem.HONG_KRAHN_SZEGO):
        # the Euclidean statements also admit the BBMP convexity class
        fallback = check_admissibility(
            spec.profile,
            [Admissibility.BBMP_CONVEXITY, Admissibility.NON_INCREASING],
            t_max=t_cap,
            dim=spec.model.dimension,
        )
        if fallback:
            return fallback
    return primary


def _is_centered_disk(shape: ShapeSpec | None) -> bool:
    if shape is None or shape.name != "disk":
        return False
    p = shape.params
    return len(p) == 1 or (abs(p[0]) < 1e-12 and abs(p[1]) < 1e-12)


def _mesh_t_max(model: SpaceFormModel, mesh) -> float:
    from .spaceform import geodesic_distance_to_origin

    return float(np.max(geodesic_distance_to_origin(model, mesh.vertices)))


# ---------------------------------------------------------------------------
# single-experiment runners


def _finish(spec, lhs, rhs, sense, verdict, diagnostics, equality, start,
            extra_ok=True, strict=False):
    """Assemble the report; margin is signed and normalized by the ball side."""
    if sense == ">=":
        margin = (lhs - rhs) / rhs
    else:
        margin = (rhs - lhs) / rhs
    if verdict is not None and not verdict:
        status = "Inconclusive"
    elif not extra_ok:
        status = "Fail"
    elif strict and not margin > 0:
        status = "Fail"
    elif margin < -spec.tolerance:
        status = "Fail"
    elif equality and abs(margin) > spec.tolerance:
        status = "Fail"
    else:
        status = "Pass"
    return InequalityReport(
        spec=spec,
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        hypothesis_check=verdict,
        status=status,
        runtime_ms=int(round((time.perf_counter() - start) * 1000)),
        diagnostics=diagnostics,
    )


def _inconclusive(spec, verdict, start, reason):
    return InequalityReport(
        spec=spec,
        lhs=float("nan"),
        rhs=float("nan"),
        margin=float("nan"),
        hypothesis_check=verdict,
        status="Inconclusive",
        runtime_ms=int(round((time.perf_counter() - start) * 1000)),
        diagnostics={"reason": reason},
    )


def run_faber_krahn(spec: ExperimentSpec) -> InequalityReport:
    """lambda_1(Omega) vs lambda_1 of the volume-matched centered ball."""
    start = time.perf_counter()
    mesh = generate_mesh(spec.shape, spec.mesh_h, model=spec.model)
    t_max = _mesh_t_max(spec.model, mesh)
    verdict = _hypothesis_verdict(spec, 1.25 * t_max)
    if not verdict:
        return _inconclusive(spec, verdict, start, verdict.detail)

    res = domain_spectrum(
        mesh, spec.model, spec.profile, BoundaryCondition.DIRICHLET, 1
    )
    volume = res.weighted_volume
    R = solve_radius(spec.model, spec.profile, volume)
    ball = first_dirichlet(spec.model, spec.profile, R)
    diag = {
        "weighted_volume": volume,
        "matched_radius": R,
        "fem_residual": float(np.max(res.residuals)),
        "ball_residual": ball.residual,
        "h_max": mesh.h_max,
    }
    return _finish(
        spec, res.eigenvalues[0], ball.eigenvalue, ">=", verdict, diag,
        _is_centered_disk(spec.shape), start,
    )


def run_faber_krahn_hemisphere(spec: ExperimentSpec) -> InequalityReport:
    """Faber-Krahn on weighted hemisphere caps (disks in the stereographic
    chart have constant-curvature geodesic boundary circles)."""
    return run_faber_krahn(spec)


def run_hks(spec: ExperimentSpec) -> InequalityReport:
    """lambda_2(Omega) vs lambda_1 of the ball at half the weighted volume."""
    start = time.perf_counter()
    mesh = generate_mesh(spec.shape, spec.mesh_h, model=spec.model)
    t_max = _mesh_t_max(spec.model, mesh)
    verdict = _hypothesis_verdict(spec, 1.25 * t_max)
    if not verdict:
        return _inconclusive(spec, verdict, start, verdict.detail)

    res = domain_spectrum(
        mesh, spec.model, spec.profile, BoundaryCondition.DIRICHLET, 2
    )
    half = 0.5 * res.weighted_volume
    R = solve_radius(spec.model, spec.profile, half)
    ball = first_dirichlet(spec.model, spec.profile, R)
    nodal = nodal_domain_count(res.eigenfields[1])
    diag = {
        "weighted_volume": res.weighted_volume,
        "half_volume_radius": R,
        "nodal_domains_second": nodal,
        "fem_residual": float(np.max(res.residuals)),
        "h_max": mesh.h_max,
    }
    equality = (
        spec.shape.name == "two_disjoint_disks" and spec.profile.label == "zero"
    )
    return _finish(
        spec, res.eigenvalues[1], ball.eigenvalue, ">=", verdict, diag,
        equality, start, extra_ok=(nodal == 2),
    )


def trial_monotonicity(model: SpaceFormModel, pair) -> dict:
    """Monotonicity of the Neumann trial data: h non-decreasing and
    q = (h')^2 + (n-1) h^2 / S_kappa^2 non-increasing, sampled on the
    eigenfunction's own grid (slack 1e-8 of each scale)."""
    t = pair.t[1:]
    hv = pair.values[1:]
    hpv = pair.derivs[1:]
    sk = s_kappa(model, t)
    q = hpv**2 + (model.dimension - 1) * hv**2 / sk**2
    h_slack = 1e-8 * float(np.max(np.abs(hv)))
    q_slack = 1e-8 * float(np.max(q))
    return {
        "h_non_decreasing": bool(np.all(np.diff(hv) >= -h_slack)),
        "q_non_increasing": bool(np.all(np.diff(q) <= q_slack)),
    }


def run_szego_weinberger(spec: ExperimentSpec) -> InequalityReport:
    """mu_1(Omega) vs mu_1(B_R) after the Brouwer recentering step.

    The weight origin rides along with the trial functions, so the matched
    volume, the comparison ball, and the trial profile h are recomputed
    until the shift settles (the moment map depends on h, which depends on
    the matched radius, which depends on the shift).
    """
    start = time.perf_counter()
    mesh = generate_mesh(spec.shape, spec.mesh_h, model=spec.model)
    verdict = _hypothesis_verdict(
        spec, 1.25 * _mesh_t_max(spec.model, mesh) + 1.0
    )
    if not verdict:
        return _inconclusive(spec, verdict, start, verdict.detail)

    shift = np.asarray(mesh.vertices.mean(axis=0), dtype=float)
    summary = None
    for _ in range(12):
        volume = mesh_weighted_volume(
            spec.model, spec.profile, mesh, origin=tuple(shift)
        )
        R = solve_radius(spec.model, spec.profile, volume)
        summary = first_neumann(spec.model, spec.profile, R)
        h, _ = trial_h(summary.pair_1_1)
        new_shift = recenter_for_zero_mean(
            mesh, spec.model, spec.profile, h, start=tuple(shift)
        )
        done = np.linalg.norm(new_shift - shift) <= 1e-9 * (
            1.0 + np.linalg.norm(new_shift)
        )
        shift = new_shift
        if done:
            break

    res = domain_spectrum(
        mesh,
        spec.model,
        spec.profile,
        BoundaryCondition.NEUMANN,
        2,
        origin=tuple(shift),
    )
    diag = {
        "weighted_volume": volume,
        "matched_radius": R,
        "recenter_shift": [float(shift[0]), float(shift[1])],
        "fem_residual": float(np.max(res.residuals)),
        "mu_ordering_holds": summary.ordering_holds,
        "h_max": mesh.h_max,
        **trial_monotonicity(spec.model, summary.pair_1_1),
    }
    return _finish(
        spec, res.eigenvalues[1], summary.first_nonzero, "<=", verdict, diag,
        _is_centered_disk(spec.shape), start,
    )


def run_appendix_ordering(spec: ExperimentSpec) -> InequalityReport:
    """mu_{1,1} < mu_{0,2} for balls over the R grid, with the Wronskian
    cross-check of the two modes at each endpoint."""
    start = time.perf_counter()
    grid = spec.radius_grid or _DEFAULT_GRIDS[int(spec.model.kappa)]
    verdict = _hypothesis_verdict(spec, 1.0001 * max(grid))
    if not verdict:
        return _inconclusive(spec, verdict, start, verdict.detail)

    rows = []
    worst = None
    for R in grid:
        summary = first_neumann(spec.model, spec.profile, float(R))
        wr = wronskian_residual(summary.pair_1_1, summary.pair_0_2, float(R))
        margin = (summary.mu_0_2 - summary.mu_1_1) / summary.mu_0_2
        rows.append(
            {
                "R": float(R),
                "mu_1_1": summary.mu_1_1,
                "mu_0_2": summary.mu_0_2,
                "margin": margin,
                "wronskian_residual": wr,
                "node_counts": [
                    summary.pair_1_1.node_count,
                    summary.pair_0_2.node_count,
                ],
            }
        )
        if worst is None or margin < worst["margin"]:
            worst = rows[-1]
    diag = {"grid": [float(R) for R in grid], "per_radius": rows}
    wron_ok = all(r["wronskian_residual"] <= WRONSKIAN_TOL for r in rows)
    nodes_ok = all(r["node_counts"] == [0, 1] for r in rows)
    return _finish(
        spec, worst["mu_1_1"], worst["mu_0_2"], "<=", verdict, diag,
        False, start, extra_ok=wron_ok and nodes_ok, strict=True,
    )


_RUNNERS = {
    Theorem.FABER_KRAHN: run_faber_krahn,
    Theorem.FABER_KRAHN_HEMISPHERE: run_faber_krahn_hemisphere,
    Theorem.HONG_KRAHN_SZEGO: run_hks,
    Theorem.SZEGO_WEINBERGER: run_szego_weinberger,
    Theorem.APPENDIX_ORDERING: run_appendix_ordering,
}


def run_experiment(spec: ExperimentSpec) -> InequalityReport:
    """Dispatch to the theorem's runner; solver failures become Inconclusive."""
    start = time.perf_counter()
    try:
        return _RUNNERS[spec.theorem](spec)
    except (ConvergenceError, QuadratureError, DomainError, MeshError) as exc:
        return _inconclusive(spec, None, start, f"{type(exc).__name__}: {exc}")


# ---------------------------------------------------------------------------
# config parsing and the suite runner


def _parse_experiment(entry: dict, index: int) -> ExperimentSpec:
    where = f"experiment {index}"
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: must be an object")
    try:
        theorem = Theorem(entry["theorem"])
    except KeyError:
        raise ConfigError(f"{where}: missing field 'theorem'") from None
    except ValueError:
        raise ConfigError(
            f"{where}: unknown theorem '{entry['theorem']}' "
            f"(choose from {[t.value for t in Theorem]})"
        ) from None

    kappa = entry.get("kappa")
    if kappa not in (-1, 0, 1):
        raise ConfigError(f"{where}: 'kappa' must be -1, 0, or 1, got {kappa!r}")
    dim = entry.get("dim", 2)
    if not isinstance(dim, int) or dim < 2:
        raise ConfigError(f"{where}: 'dim' must be an integer >= 2")

    if "weight" not in entry:
        raise ConfigError(f"{where}: missing field 'weight'")
    try:
        profile = parse_weight(str(entry["weight"]))
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from None

    shape = None
    if entry.get("shape") is not None:
        try:
            shape = ShapeSpec.parse(str(entry["shape"]))
        except MeshError as exc:
            raise ConfigError(f"{where}: {exc}") from None
        if shape.name not in KNOWN_SHAPES:
            raise ConfigError(
                f"{where}: unknown shape '{shape.name}' "
                f"(choose from {list(KNOWN_SHAPES)})"
            )

    grid = entry.get("radius_grid")
    if grid is not None:
        if not isinstance(grid, (list, tuple)) or not grid or any(
            not isinstance(g, (int, float)) or g <= 0 for g in grid
        ):
            raise ConfigError(f"{where}: 'radius_grid' must list positive radii")
        grid = tuple(float(g) for g in grid)

    try:
        model = space_form(kappa, dim)
        return ExperimentSpec(
            theorem=theorem,
            model=model,
            profile=profile,
            shape=shape,
            mesh_h=entry.get("mesh_h"),
            num_levels=int(entry.get("num_levels", 256)),
            tolerance=float(entry.get("tolerance", 0.02)),
            radius_grid=grid,
        )
    except (ConfigError, DomainError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def load_config(path) -> list:
    """Parse and validate a suite config; returns sorted ExperimentSpecs."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict) or "experiments" not in raw:
        raise ConfigError("config must be an object with an 'experiments' list")
    if not isinstance(raw["experiments"], list):
        raise ConfigError("'experiments' must be a list")
    specs = [
        _parse_experiment(entry, i) for i, entry in enumerate(raw["experiments"])
    ]
    return sorted(specs, key=lambda s: s.sort_key())


CSV_HEADER = "theorem,kappa,weight,shape,lhs,rhs,margin,status"


def run_suite(config_path, out_dir) -> int:
    """Run every experiment in the config; write summary.csv and report.json.

    Exit code: 0 all Pass, 2 if any Fail, 3 if no Fail but some
    Inconclusive.  (Malformed configs raise ConfigError; the CLI maps that
    to exit code 1.)
    """
    specs = load_config(config_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    reports = [run_experiment(s) for s in specs]

    lines = [CSV_HEADER] + [r.csv_row() for r in reports]
    (out / "summary.csv").write_text("\n".join(lines) + "\n")
    payload = {
        "config": str(config_path),
        "experiments": [r.to_json_dict() for r in reports],
    }
    (out / "report.json").write_text(json.dumps(payload, indent=2) + "\n")

    if any(r.status == "Fail" for r in reports):
        return 2
    if any(r.status == "Inconclusive" for r in reports):
        return 3
    return 0


def default_config_path() -> Path:
    """The corpus config shipped with the repository."""
    return Path(__file__).resolve().parents[2] / "configs" / "default.json"
