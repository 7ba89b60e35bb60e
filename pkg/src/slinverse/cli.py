"""Command-line interface.

Subcommands:
    forward  -- generate spectral data for a builtin potential
    solve1   -- recover (q, h, H) from eigenvalues + norming constants
    solve2   -- recover (q, h, H) from two spectra
    flip     -- rewrite a robin-robin dataset with the flipped problem's
                norming constants

Exit codes: 0 on success, 2 on validation failure, 3 on numerical failure.
Outputs are deterministic (17-significant-digit formatting) so repeated
runs with the same inputs are byte-identical.
"""

import argparse
import sys

import numpy as np

from . import charfun, dataio, forward, pipeline, potentials, spectral
from .glsystem import SingularSystemError

_DIFF = {"spline6": "spline6", "cheb": "chebyshev_filtered"}


def _add_solver_flags(p):
    p.add_argument("--equations", type=int, default=8,
                   help="equations kept in the truncated main system (N+1)")
    p.add_argument("--augment", type=int, default=5000, metavar="M",
                   help="final maximum data index after asymptotic augmentation")
    p.add_argument("--mesh-size", type=int, default=201)
    p.add_argument("--no-flip", action="store_true",
                   help="skip the flipped-problem pass for the right half")
    p.add_argument("--diff", choices=sorted(_DIFF), default="cheb")
    p.add_argument("--cond-threshold", type=float, default=10.0)
    p.add_argument("--omega-method", choices=("fit", "h0"), default="fit")
    p.add_argument("--seed-potential", default=None,
                   help="builtin potential name used as error reference "
                        "(defaults to the generator recorded in the input file)")
    p.add_argument("--out", required=True,
                   help="output base path; writes <out>.csv and <out>.json")


def _config(args):
    return pipeline.SolveConfig(
        N=args.equations - 1,
        M=args.augment,
        mesh_size=args.mesh_size,
        flip=not args.no_flip,
        diff_method=_DIFF[args.diff],
        cond_threshold=args.cond_threshold,
        omega_method=args.omega_method,
    )


def _reference(args, meta):
    name = args.seed_potential
    if name is None:
        name = meta.get("generator", {}).get("q")
    if name is None or name not in potentials.BUILTIN:
        return None
    fn, _ = potentials.get_potential(name)
    return fn


def cmd_forward(args):
    fn, breaks = potentials.get_potential(args.q)
    meta = {
        "generator": {"q": args.q, "h": args.h, "H": args.H,
                      "count": args.count, "bc_right": args.bc_right},
        "tolerances": {"ode_rtol": 2e-13, "eigenvalue_tol": 1e-12},
    }
    if args.bc_right == "both":
        data = forward.two_spectra(fn, args.h, args.H, args.count, breaks)
    else:
        data = forward.solve_forward(
            forward.ForwardProblem(fn, args.h, args.H, args.count,
                                   args.bc_right, breaks)
        )
    dataio.write_dataset(args.out, data, meta)
    print(f"wrote {args.out}")
    return 0


def _run_solver(args, solverfn, expected):
    data, meta = dataio.read_dataset(args.data)
    if not isinstance(data, expected):
        raise pipeline.SpectralValidationError(
            [f"input file holds {type(data).__name__}, expected {expected.__name__}"]
        )
    recon = solverfn(data, _config(args))
    ref = _reference(args, meta)
    q_ref = ref(recon.mesh) if ref is not None else None
    dataio.write_reconstruction_csv(args.out + ".csv", recon, q_ref)
    report = dataio.reconstruction_report(recon, q_ref)
    dataio.dump_json(report, args.out + ".json")
    msg = f"h={recon.h:.9g} H={recon.H:.9g} omega={recon.omega:.9g}"
    if "l1_error" in report:
        msg += f" L1={report['l1_error']:.3e}"
    print(msg)
    print(f"wrote {args.out}.csv, {args.out}.json")
    return 0


def cmd_solve1(args):
    return _run_solver(args, pipeline.solve_problem1, spectral.SpectralDataset)


def cmd_solve2(args):
    return _run_solver(args, pipeline.solve_problem2, spectral.TwoSpectraDataset)


def cmd_flip(args):
    data, meta = dataio.read_dataset(args.data)
    if not isinstance(data, spectral.SpectralDataset):
        raise pipeline.SpectralValidationError(
            ["flip requires robin-robin data (rho and alpha)"]
        )
    violations = spectral.validate(data)
    if violations:
        raise pipeline.SpectralValidationError(violations)
    shifted, lam0 = spectral.shift_to_zero(data)
    model = spectral.fit_asymptotics(shifted)
    aug = spectral.augment_with_asymptotics(shifted, model, args.augment)
    coeffs = charfun.recover_hn(aug.rho, args.cond_threshold)
    alpha_r = charfun.flip_norming_constants(
        aug.rho, aug.alpha, coeffs, omega=model.omega
    )
    flipped = spectral.SpectralDataset.from_arrays(data.rho, alpha_r[: len(data)])
    meta = dict(meta)
    meta["flipped"] = True
    dataio.write_dataset(args.out, flipped, meta)
    print(f"wrote {args.out}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="slinverse",
        description="Recover a Sturm-Liouville potential and boundary "
                    "parameters from spectral data.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="generate spectral data")
    p.add_argument("--q", required=True, help="builtin potential name")
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--H", type=float, default=0.0)
    p.add_argument("--count", type=int, default=201)
    p.add_argument("--bc-right", choices=("robin", "dirichlet", "both"),
                   default="robin")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_forward)

    p = sub.add_parser("solve1", help="inverse solve from rho + alpha")
    p.add_argument("data")
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_solve1)

    p = sub.add_parser("solve2", help="inverse solve from two spectra")
    p.add_argument("data")
    _add_solver_flags(p)
    p.set_defaults(fn=cmd_solve2)

    p = sub.add_parser("flip", help="flip a robin-robin dataset")
    p.add_argument("data")
    p.add_argument("--augment", type=int, default=5000)
    p.add_argument("--cond-threshold", type=float, default=10.0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_flip)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (pipeline.SpectralValidationError, KeyError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except (charfun.ConditioningError, SingularSystemError,
            forward.BracketingError, forward.RefinementError,
            np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
