"""Command-line surface: divergences, metrics, verification, DPI scans.

Flags mirror module parameter names; a JSON --config file may supply the same
keys (explicit flags win).  QIG_SEED overrides the default seed.  Exit codes:
0 success, 1 numeric failure or failed checks, 2 validation failure.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import serialize
from .channels import PROVEN_QZ_POINTS, dpi_points_scan, dpi_scan
from .entropies import (
    QZParams,
    bures_divergence,
    qz_divergence,
    trace_functional,
    tsallis_divergence,
    von_neumann_divergence,
    wigner_yanase_divergence,
)
from .errors import (
    BadDim,
    BadDims,
    BadGrid,
    BadParams,
    DimMismatch,
    NotHermitian,
    NotTraceless,
    QigError,
)
from .metric import metric_qz, special_metric
from .states import ProbabilityVector, fold, random_unfolded
from .su import build_su_basis
from .verify import run_default_suite

_VALIDATION_ERRORS = (
    BadParams,
    BadGrid,
    BadDim,
    BadDims,
    DimMismatch,
    NotTraceless,
    NotHermitian,
)


def _default_seed() -> int:
    return int(os.environ.get("QIG_SEED", "0"))


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise BadParams(f"cannot parse float list {text!r}") from exc


def _parse_grid(text: str) -> list[float]:
    """Either 'a,b,c' or 'start:stop:count' (inclusive endpoints)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise BadParams(f"grid spec must be start:stop:count, got {text!r}")
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
        if count < 1:
            raise BadParams(f"grid count must be >= 1, got {count}")
        return [float(x) for x in np.linspace(start, stop, count)]
    return _parse_floats(text)


def _emit(text: str, output: str | None) -> None:
    if output:
        serialize.write_text_atomic(output, text)
    else:
        sys.stdout.write(text)


def _load_state(path: str):
    with open(path) as handle:
        return serialize.density_matrix_from_dict(json.load(handle))


def _seeded_pair(n: int, seed: int, min_eig: float):
    children = np.random.SeedSequence(seed).spawn(2)
    rho = fold(random_unfolded(n, min_eig, np.random.default_rng(children[0])))
    sigma = fold(random_unfolded(n, min_eig, np.random.default_rng(children[1])))
    return rho, sigma


def cmd_divergence(args) -> int:
    if args.rho or args.sigma:
        if not (args.rho and args.sigma):
            raise BadParams("state files must be given for both --rho and --sigma")
        rho, sigma = _load_state(args.rho), _load_state(args.sigma)
        source = "files"
    else:
        if args.n is None:
            raise BadParams("either --rho/--sigma files or --n with --seed")
        rho, sigma = _seeded_pair(args.n, args.seed, args.min_eig)
        source = f"seed:{args.seed}"
    params = QZParams(args.q, args.z)
    payload = {
        "schema": serialize.SCHEMA,
        "kind": "divergence",
        "n": rho.n,
        "q": params.q,
        "z": params.z,
        "source": source,
        "value": qz_divergence(rho, sigma, params),
    }
    if args.include_special:
        payload["special"] = {
            "bures": bures_divergence(rho, sigma),
            "wigner_yanase": wigner_yanase_divergence(rho, sigma),
            "von_neumann": von_neumann_divergence(rho, sigma),
            "tsallis": tsallis_divergence(rho, sigma, params.q),
        }
    if args.include_log_form:
        # unregularized log form, reporting only
        payload["log_form"] = -math.log(trace_functional(rho, sigma, params)) / (
            1.0 - params.q
        )
    _emit(serialize.dumps(payload), args.output)
    return 0


def cmd_metric(args) -> int:
    if args.p is None:
        raise BadParams("metric needs --p (comma-separated probabilities)")
    p = ProbabilityVector(np.asarray(_parse_floats(args.p)))
    basis = build_su_basis(p.n)
    if args.special:
        g = special_metric(p, args.special, basis, q=args.q)
        params = {"special": args.special}
        if args.special == "tsallis":
            params["q"] = args.q
    else:
        if args.q is None or args.z is None:
            raise BadParams("metric needs --q and --z (or --special)")
        g = metric_qz(p, QZParams(args.q, args.z), basis)
        params = {"q": args.q, "z": args.z}
    _emit(serialize.dumps(serialize.metric_tensor_to_dict(g, params)), args.output)
    return 0


def cmd_verify(args) -> int:
    dims = tuple(int(x) for x in _parse_floats(args.dims))
    checks = run_default_suite(
        dims=dims, q=args.q, z=args.z, seed=args.seed,
        tol_scale=args.tol_scale, only=args.check,
    )
    if not checks:
        raise BadParams(f"no checks match {args.check!r}")
    _emit(serialize.dumps(serialize.checks_to_dict(checks)), args.output)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"FAIL {c.name}: {c.value:.3e} > {c.tolerance:.3e}", file=sys.stderr)
    return 1 if failed else 0


def cmd_dpi_scan(args) -> int:
    if args.proven_set:
        result = dpi_points_scan(
            PROVEN_QZ_POINTS, n=args.n, trials=args.trials, seed=args.seed
        )
    else:
        result = dpi_scan(
            _parse_grid(args.q_grid), _parse_grid(args.z_grid),
            n=args.n, trials=args.trials, seed=args.seed,
        )
    if args.format == "csv":
        _emit(serialize.dpi_result_to_csv(result), args.output)
    else:
        _emit(serialize.dumps(serialize.dpi_result_to_dict(result)), args.output)
    if args.assert_zero and result.total_violations:
        print(
            f"DPI violations detected: {result.total_violations}", file=sys.stderr
        )
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qig",
        description="q-z relative entropies and induced metric tensors",
    )
    parser.add_argument("--config", help="JSON file supplying the same keys as flags")
    sub = parser.add_subparsers(dest="command", required=True)

    div = sub.add_parser("divergence", help="evaluate divergences on a state pair")
    div.add_argument("--rho", help="JSON density matrix file (left argument)")
    div.add_argument("--sigma", help="JSON density matrix file (right argument)")
    div.add_argument("--n", type=int, help="dimension for seeded random states")
    div.add_argument("--seed", type=int, default=None)
    div.add_argument("--min-eig", type=float, default=0.05)
    div.add_argument("--q", type=float, required=False)
    div.add_argument("--z", type=float, required=False)
    div.add_argument("--include-special", action="store_true")
    div.add_argument("--include-log-form", action="store_true")
    div.add_argument("--output")
    div.set_defaults(func=cmd_divergence)

    met = sub.add_parser("metric", help="assemble a metric tensor at a simplex point")
    met.add_argument("--p", help="comma-separated probabilities")
    met.add_argument("--q", type=float)
    met.add_argument("--z", type=float)
    met.add_argument(
        "--special", choices=["bures", "wigner_yanase", "tsallis", "von_neumann"]
    )
    met.add_argument("--output")
    met.set_defaults(func=cmd_metric)

    ver = sub.add_parser("verify", help="run the finite-difference check suites")
    ver.add_argument("--dims", default="2,3")
    ver.add_argument("--q", type=float, default=0.4)
    ver.add_argument("--z", type=float, default=1.3)
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--check", help="only run checks whose name contains this")
    ver.add_argument("--tol-scale", type=float, default=1.0)
    ver.add_argument("--output")
    ver.set_defaults(func=cmd_verify)

    scan = sub.add_parser("dpi-scan", help="empirical data-processing-inequality scan")
    scan.add_argument("--q-grid", default="0.1:0.9:20", help="'a,b,c' or start:stop:count")
    scan.add_argument("--z-grid", default="0.25:3.0:20")
    scan.add_argument("--n", type=int, default=2)
    scan.add_argument("--trials", type=int, default=20)
    scan.add_argument("--seed", type=int, default=None)
    scan.add_argument(
        "--proven-set", action="store_true",
        help="scan the DPI-proven sample points instead of a grid",
    )
    scan.add_argument(
        "--assert-zero", action="store_true",
        help="exit nonzero if any violation is recorded",
    )
    scan.add_argument("--format", choices=["json", "csv"], default="json")
    scan.add_argument("--output")
    scan.set_defaults(func=cmd_dpi_scan)
    return parser


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    if args.config:
        with open(args.config) as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise BadParams("config file must hold a JSON object")
        for key, value in data.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise BadParams(f"unknown config key {key!r}")
            if getattr(args, attr) in (None, False):
                setattr(args, attr, value)
    if getattr(args, "seed", None) is None:
        args.seed = _default_seed()
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args)
        if args.func in (cmd_divergence,) and (args.q is None or args.z is None):
            raise BadParams("divergence needs --q and --z")
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
