"""Command-line front end: eigenvalues, measure ops, meshes, and suites."""

import argparse
import sys

from .errors import ConfigError, WittenlapError
from .fem2d import ShapeSpec, generate_mesh, save_mesh
from .harness import default_config_path, run_suite
from .measure import ball_weighted_volume, solve_radius
from .radial import BoundaryCondition, RadialMode, eigenvalue
from .spaceform import space_form
from .weights import parse_weight


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kappa", type=int, choices=(-1, 0, 1), required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--weight", default="zero", help="profile NAME or NAME:PARAM")


def _model_profile(args):
    return space_form(args.kappa, args.dim), parse_weight(args.weight)


def _cmd_ball(args) -> int:
    model, profile = _model_profile(args)
    mode = RadialMode.parse(args.mode, BoundaryCondition.parse(args.bc))
    pair = eigenvalue(model, profile, mode, args.radius)
    print(repr(pair.eigenvalue))
    return 0


def _cmd_volume(args) -> int:
    model, profile = _model_profile(args)
    print(repr(ball_weighted_volume(model, profile, args.radius)))
    return 0


def _cmd_radius_for_volume(args) -> int:
    model, profile = _model_profile(args)
    print(repr(solve_radius(model, profile, args.volume)))
    return 0


def _cmd_verify(args) -> int:
    return run_suite(args.config, args.out)


def _cmd_mesh(args) -> int:
    model = space_form(args.kappa) if args.kappa is not None else None
    mesh = generate_mesh(ShapeSpec.parse(args.shape), args.h, model=model)
    save_mesh(mesh, args.out)
    print(f"{args.out}: {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wittenlap",
        description="Weighted-Laplacian ball spectra and inequality suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="radial eigenvalue of a geodesic ball")
    _add_model_args(p)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--bc", choices=("dirichlet", "neumann"), required=True)
    p.add_argument("--mode", default="0,1", help="angular degree and overtone 'l,j'")
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("volume", help="weighted volume of a geodesic ball")
    _add_model_args(p)
    p.add_argument("--radius", type=float, required=True)
    p.set_defaults(func=_cmd_volume)

    p = sub.add_parser("radius-for-volume", help="invert the volume map")
    _add_model_args(p)
    p.add_argument("--volume", type=float, required=True)
    p.set_defaults(func=_cmd_radius_for_volume)

    p = sub.add_parser("verify", help="run an inequality suite from a config")
    p.add_argument("--config", default=str(default_config_path()))
    p.add_argument("--out", default="reports")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("mesh", help="triangulate a shape and save it")
    p.add_argument("--shape", required=True)
    p.add_argument("--h", type=float, required=True, dest="h")
    p.add_argument("--out", required=True)
    p.add_argument("--kappa", type=int, choices=(-1, 0, 1), default=None)
    p.set_defaults(func=_cmd_mesh)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except WittenlapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
