"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 bad input data,
5 an REE estimate did not reach its gap tolerance.
"""

import argparse
import os
import sys
import warnings

import numpy as np

from . import __version__
from .channels import CHANNELS, SweepSpec, sweep
from .exceptions import DataError, DimensionError, EntangleBenchError, InvalidSpecError, ReeConvergenceWarning
from .io import (
    RunManifest,
    format_float,
    manifest_path,
    read_csv,
    read_states,
    sha256_file,
    write_csv,
    write_states,
)
from .parallel import default_jobs, ordered_map

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DATA, EXIT_NOCONV = 0, 2, 3, 4, 5
SEED_ENV = "ENTANGLE_BENCH_SEED"

MEASURE_COLUMNS = ["concurrence", "c_max", "negativity", "log_negativity", "neg_eig", "eof", "ree", "ree_gap"]
OPT_COLUMNS = ["state_id", "qfi", "mqfi_max", "mqfi_min"] + [
    f"{kind}_{q}_{ang}" for kind in ("max", "min") for q in ("a", "b") for ang in ("alpha", "beta", "gamma")
]
SWEEP_STATES = ("ghz3", "w3", "wlike3", "bell")


class UsageError(Exception):
    pass


def parse_angle(text):
    """Angle such as ``1.57``, ``pi/2``, ``2pi/3`` or ``pi``."""
    s = text.strip().lower().replace(" ", "")
    try:
        if "pi" not in s:
            return float(s)
        num, _, den = s.partition("/")
        coef = num.replace("*", "").replace("pi", "")
        c = float(coef) if coef not in ("", "+") else 1.0
        if coef == "-":
            c = -1.0
        return c * np.pi / (float(den) if den else 1.0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def parse_dims(text):
    try:
        a, b = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 2x2, got {text!r}") from None
    if (a, b) not in ((2, 2), (2, 3)):
        raise argparse.ArgumentTypeError("dims must be 2x2 or 2x3")
    return a, b


def _non_negative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="entangle-bench", description="Entanglement measures and QFI benchmarks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, jobs=True):
        if jobs:
            sp.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: logical cores)")
        sp.add_argument("--no-manifest", action="store_true", help="do not write the run manifest")

    s = sub.add_parser("sample", help="draw random states")
    s.add_argument("--dims", type=parse_dims, default=(2, 2))
    s.add_argument("--count", type=_non_negative, required=True)
    s.add_argument("--field", choices=("real", "complex"), default="complex")
    s.add_argument("--measure", choices=("hs", "pure"), default="hs")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", required=True)
    common(s, jobs=False)

    s = sub.add_parser("measure", help="entanglement measures of a state file")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--measures", default=",".join(m for m in MEASURE_COLUMNS if m != "ree_gap"))
    s.add_argument("--ree-tol", type=float, default=1e-4)
    s.add_argument("--ree-max-iter", type=_positive, default=2000)
    s.add_argument("--seed", type=int, default=None, help="REE oracle seed")
    s.add_argument("--out", required=True)
    common(s)

    s = sub.add_parser("optimize", help="local-rotation QFI extremes")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--step", type=parse_angle, default=np.pi / 2)
    s.add_argument("--refine", type=parse_angle, default=np.pi / 3)
    s.add_argument("--refine-threshold", type=float, default=0.01)
    s.add_argument("--middle-axis", choices=("z", "y"), default="z")
    s.add_argument("--out", required=True)
    common(s)

    s = sub.add_parser("sweep", help="quantity against channel strength")
    s.add_argument("--state", required=True)
    s.add_argument("--channel", required=True)
    s.add_argument("--quantity", choices=("mean_qfi", "concurrence", "negativity", "ree"), default="mean_qfi")
    s.add_argument("--p-steps", type=_positive, default=101)
    s.add_argument("--out", required=True)
    common(s)

    s = sub.add_parser("superposition-scan", help="mean QFI of a|W> + b|GHZ> against a")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha-steps", type=_positive, default=101)
    s.add_argument("--phase", type=parse_angle, default=0.0)
    s.add_argument("--out", required=True)
    common(s, jobs=False)

    s = sub.add_parser("census", help="ordering classes over all state pairs")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--mqfi", default=None)
    s.add_argument("--measures", default="concurrence,negativity,ree")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--out", required=True)
    common(s, jobs=False)

    s = sub.add_parser("scatter", help="SVG scatter plot of two CSV columns")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--out", required=True)
    common(s, jobs=False)

    s = sub.add_parser("replay", help="re-run a manifest and compare checksums")
    s.add_argument("manifest")
    return p


def resolve_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _jobs(args):
    return args.jobs or default_jobs()


# --- commands ----------------------------------------------------------------


def cmd_sample(args):
    from .states import EnsembleSpec, sample_state

    spec = EnsembleSpec(args.count, args.seed, args.field, args.measure, args.dims)
    write_states(args.out, ((k, sample_state(spec, k)) for k in range(spec.count)))
    return [], [args.out], EXIT_OK


def _measure_row(item):
    from .measures import measure_all
    from .states import state_rng

    idx, rho, wanted, cfg, seed = item
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReeConvergenceWarning)
        rec = measure_all(rho, cfg, rng=state_rng(seed, idx), include_ree="ree" in wanted)
    row = [idx]
    for col in MEASURE_COLUMNS:
        key = "ree" if col == "ree_gap" else col
        row.append(getattr(rec, col) if key in wanted else None)
    return row, rec.ree_converged is False


def cmd_measure(args):
    wanted = {m.strip() for m in args.measures.split(",") if m.strip()}
    unknown = wanted - set(MEASURE_COLUMNS)
    if unknown:
        raise UsageError(f"unknown measures {sorted(unknown)}; choose from {MEASURE_COLUMNS}")
    from .ree import ReeConfig

    try:
        cfg = ReeConfig(max_iterations=args.ree_max_iter, gap_tolerance=args.ree_tol)
    except InvalidSpecError as exc:
        raise UsageError(str(exc)) from None
    states = read_states(args.inp)
    items = [(idx, rho, wanted, cfg, args.seed) for idx, rho in states]
    results = ordered_map(_measure_row, items, jobs=_jobs(args))
    write_csv(args.out, ["id"] + MEASURE_COLUMNS, (r for r, _ in results))
    code = EXIT_NOCONV if any(flag for _, flag in results) else EXIT_OK
    return [args.inp], [args.out], code


def _optimize_row(item):
    from .qfi import optimize_qfi

    idx, rho, cfg = item
    if rho.dims != (2, 2):
        raise DataError(f"state {idx} is not two-qubit")
    r = optimize_qfi(rho, cfg)
    return [idx, r.original, r.maximized, r.minimized, *r.max_angles[0], *r.max_angles[1], *r.min_angles[0], *r.min_angles[1]]


def cmd_optimize(args):
    from .qfi import OptimizeConfig

    try:
        cfg = OptimizeConfig(args.step, args.refine, args.refine_threshold, args.middle_axis)
    except InvalidSpecError as exc:
        raise UsageError(str(exc)) from None
    states = read_states(args.inp)
    rows = ordered_map(_optimize_row, [(i, r, cfg) for i, r in states], jobs=_jobs(args))
    write_csv(args.out, OPT_COLUMNS, rows)
    return [args.inp], [args.out], EXIT_OK


def sweep_state(name):
    from .states import bell_state, ghz_state, w_like_state, w_state

    makers = {"ghz3": lambda: ghz_state(3), "w3": lambda: w_state(3), "wlike3": w_like_state, "bell": lambda: bell_state(1)}
    if name not in makers:
        raise UsageError(f"unknown state {name!r}; choose from {SWEEP_STATES}")
    return makers[name]()


def cmd_sweep(args):
    rho = sweep_state(args.state.lower())
    if args.channel.upper() not in CHANNELS:
        raise UsageError(f"unknown channel {args.channel!r}; choose from {[c.lower() for c in CHANNELS]}")
    if args.quantity != "mean_qfi" and rho.dims != (2, 2):
        raise UsageError(f"{args.quantity} needs a two-qubit state")
    grid = np.linspace(0.0, 1.0, args.p_steps) if args.p_steps > 1 else np.array([0.0])
    rows = sweep(SweepSpec(rho, args.channel, grid, args.quantity), jobs=_jobs(args))
    write_csv(args.out, ["p", "value"], rows)
    return [], [args.out], EXIT_OK


def cmd_superposition_scan(args):
    from .qfi import qfi
    from .states import superposition_state

    if not 2 <= args.n <= 5:
        raise UsageError("--n must lie in 2..5")
    alphas = np.linspace(0.0, 1.0, args.alpha_steps) if args.alpha_steps > 1 else np.array([0.0])
    rows = [(a, qfi(superposition_state(args.n, a, args.phase)).mean_qfi) for a in alphas]
    write_csv(args.out, ["alpha", "mean_qfi"], rows)
    return [], [args.out], EXIT_OK


def _records_from_csv(path, mqfi_path=None):
    header, rows = read_csv(path)
    if "id" not in header:
        raise DataError(f"{path}: missing id column")
    recs = {}
    order = []
    for r in rows:
        k = int(r["id"])
        recs[k] = {key: v for key, v in r.items() if key != "id"}
        order.append(k)
    if mqfi_path:
        mh, mrows = read_csv(mqfi_path)
        if "state_id" not in mh:
            raise DataError(f"{mqfi_path}: missing state_id column")
        ids = [int(r["state_id"]) for r in mrows]
        if sorted(ids) != sorted(order):
            raise DataError("state ids of the MQFI file do not match the results file")
        for r in mrows:
            rec = recs[int(r["state_id"])]
            rec["mean_qfi"], rec["mqfi_max"], rec["mqfi_min"] = r["qfi"], r["mqfi_max"], r["mqfi_min"]
    return [recs[k] for k in order]


def cmd_census(args):
    from .exceptions import MissingMeasureError
    from .ordering import census, resolve_measure

    measures = [m.strip() for m in args.measures.split(",") if m.strip()]
    try:
        for m in measures:
            resolve_measure(m)
    except MissingMeasureError as exc:
        raise UsageError(f"unknown measure {exc}") from None
    records = _records_from_csv(args.inp, args.mqfi)
    try:
        counts = census(records, measures, args.tol)
    except MissingMeasureError as exc:
        raise DataError(str(exc)) from None
    total = len(records) * (len(records) - 1) // 2
    rows = [(str(c), n, n / total) for c, n in counts.items()]
    write_csv(args.out, ["pattern", "count", "frequency"], rows)
    inputs = [args.inp] + ([args.mqfi] if args.mqfi else [])
    return inputs, [args.out], EXIT_OK


def cmd_scatter(args):
    from .svg import scatter_svg

    header, rows = read_csv(args.inp)
    for col in (args.x, args.y):
        if header and col not in header:
            raise DataError(f"column {col!r} not found")
    xs, ys = [], []
    for r in rows:
        x, y = r.get(args.x), r.get(args.y)
        if isinstance(x, float) and isinstance(y, float) and np.isfinite(x) and np.isfinite(y):
            xs.append(x)
            ys.append(y)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(scatter_svg(xs, ys, args.x, args.y))
    return [args.inp], [args.out], EXIT_OK


COMMANDS = {
    "sample": cmd_sample,
    "measure": cmd_measure,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "superposition-scan": cmd_superposition_scan,
    "census": cmd_census,
    "scatter": cmd_scatter,
}


def _resolved_argv(argv, args):
    # pin the seed so the manifest replays identically whatever the environment
    out = list(argv)
    if hasattr(args, "seed") and "--seed" not in out and not any(a.startswith("--seed=") for a in out):
        out += ["--seed", str(args.seed)]
    return [a for a in out if a != "--no-manifest"]


def cmd_replay(args):
    m = RunManifest.read(args.manifest)
    argv = list(m.argv) + ["--no-manifest"]
    code = main(argv)
    if code not in (EXIT_OK, EXIT_NOCONV):
        return code
    bad = [p for p, digest in m.outputs.items() if sha256_file(p) != digest]
    for p in bad:
        print(f"checksum mismatch: {p}", file=sys.stderr)
    return EXIT_DATA if bad else EXIT_OK


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "replay":
            return cmd_replay(args)
        if hasattr(args, "seed"):
            args.seed = resolve_seed(args.seed)
        manifest = RunManifest(args.command, _resolved_argv(argv, args), _config(args), getattr(args, "seed", None), __version__)
        inputs, outputs, code = COMMANDS[args.command](args)
        if not args.no_manifest:
            manifest.finish(inputs, outputs)
            for out in outputs:
                manifest.write(manifest_path(out))
        if code == EXIT_NOCONV:
            print("warning: REE did not converge on some states", file=sys.stderr)
        return code
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EntangleBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def _config(args):
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in ("command", "no_manifest"):
            continue
        cfg[k] = list(v) if isinstance(v, tuple) else (format_float(v) if isinstance(v, float) else v)
    return cfg


if __name__ == "__main__":
    sys.exit(main())
