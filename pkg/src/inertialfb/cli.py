"""Command-line entry point: `inertialfb toy` and `inertialfb deblur`."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InertialFBError
from .experiments import (
    DeblurExperimentConfig,
    DEFAULT_DEBLUR_BETAS,
    DEFAULT_TOY_BETAS,
    ToyExperimentConfig,
    run_deblur_experiment,
    run_toy_experiment,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inertialfb",
        description="Inertial forward-backward splitting experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    toy = sub.add_parser("toy", help="2D nonsmooth-nonconvex toy problem over a momentum grid")
    toy.add_argument("--beta", type=float, action="append",
                     help="momentum value; repeatable (default: 0, 0.199, 0.299)")
    toy.add_argument("--iters", type=int, default=100, help="iterations per run")
    toy.add_argument("--out-dir", type=Path, default=Path("out/toy"))
    toy.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    deblur = sub.add_parser("deblur", help="wavelet-regularized image deblurring with ISNR sweep")
    deblur.add_argument("--beta", type=float, action="append",
                        help="momentum value; repeatable (default: 0.4, 0.2, 0.01, 1e-4, 1e-7, 0)")
    deblur.add_argument("--iters", type=int, default=300)
    deblur.add_argument("--seed", type=int, default=12345, help="noise seed")
    deblur.add_argument("--lambda", dest="lam", type=float, default=1e-5,
                        help="regularization weight")
    deblur.add_argument("--noise-std", type=float, default=1e-6)
    deblur.add_argument("--image", type=Path, default=None,
                        help="grayscale PGM, dimensions divisible by 16 (default: synthetic scene)")
    deblur.add_argument("--boundary", choices=["symmetric", "zero", "periodic"],
                        default="symmetric")
    deblur.add_argument("--out-dir", type=Path, default=Path("out/deblur"))
    deblur.add_argument("--no-figures", action="store_true")
    return parser


def _cmd_toy(args) -> int:
    config = ToyExperimentConfig(
        betas=tuple(args.beta) if args.beta else DEFAULT_TOY_BETAS,
        iterations=args.iters,
    )
    results = run_toy_experiment(config, out_dir=args.out_dir)
    for r in results:
        print(
            f"start ({r.start[0]:g},{r.start[1]:g})  beta={r.beta:<6g} -> "
            f"terminal ({r.terminal[0]: .6f},{r.terminal[1]: .6f})  "
            f"nearest ({r.nearest_critical[0]:g},{r.nearest_critical[1]:g})  "
            f"dist {r.distance:.2e}  critical={r.is_critical}"
        )
    if not args.no_figures:
        from .figures import render_toy_figure

        path = render_toy_figure(results, Path(args.out_dir) / "toy_trajectories.png")
        print(f"figure written to {path}")
    print(f"CSV output in {args.out_dir}")
    return 0


def _cmd_deblur(args) -> int:
    config = DeblurExperimentConfig(
        image_path=str(args.image) if args.image else None,
        betas=tuple(args.beta) if args.beta else DEFAULT_DEBLUR_BETAS,
        iterations=args.iters,
        noise_seed=args.seed,
        noise_std=args.noise_std,
        lam=args.lam,
        boundary=args.boundary,
    )
    result = run_deblur_experiment(config, out_dir=args.out_dir)
    print(f"measured blur operator norm: {result.measured_norm:.8f}")
    for r in result.runs:
        print(f"beta={r.beta:<8g} ISNR({config.iterations}) = {r.final_isnr:.6f} dB")
    if not args.no_figures:
        from .figures import render_deblur_figures

        for path in render_deblur_figures(result, args.out_dir):
            print(f"figure written to {path}")
    print(f"CSV/PGM output in {args.out_dir}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "toy":
            return _cmd_toy(args)
        return _cmd_deblur(args)
    except InertialFBError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
