"""``gsgmi`` command-line front end.

Every subcommand that writes a file also writes ``<file>.manifest.json`` (or the
path given with ``--manifest``) recording the argv, the resolved options, the
seeds, input/output SHA-256 digests and the wall time. ``gsgmi replay`` re-runs
a manifest and checks that the outputs are bit-identical.

Exit codes: 0 success, 2 usage error, 3 numerical or validation failure.

CSV columns (stable order):
  gmi       snr_db, gmi_bits_per_2d[, mc_estimate, mc_stderr]
  sweep     file, snr_db, gmi_bits_per_2d, optimized
  optimize  iteration, gmi_bits, gmi_bits_per_2d          (--trace)
  ae        step, gmi_bits, gmi_bits_per_2d                (--trace)
  cdf       rank, gmi_bits, gmi_bits_per_2d, cdf, below_reference
  reach     name, required_snr_db, p_opt_dbm, spans, spans_real, reach_km, increase_percent
"""

import argparse
import csv
import io
import json
import logging
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from gsgmi import __version__
from gsgmi._io import atomic_write_text, sha256_file
from gsgmi.constellation import (
    Constellation,
    ConstellationError,
    gen_apsk,
    gen_psk,
    gen_qam,
    product4d,
    random_constellation,
)
from gsgmi.gmi import NoiseSpec, gmi_gh, gmi_mc

THREADS_ENV = "GSGMI_THREADS"
log = logging.getLogger("gsgmi")


class UsageError(Exception):
    pass


class FailureError(Exception):
    pass


# -- helpers ----------------------------------------------------------------


def parse_snr(text):
    """``"9"`` or ``"start:step:stop"`` (stop inclusive) -> list of floats."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad SNR spec {text!r}") from None
    if len(vals) == 1:
        return vals
    if len(vals) != 3 or vals[1] <= 0 or vals[2] < vals[0]:
        raise UsageError(f"SNR sweep must be start:step:stop with step > 0, got {text!r}")
    start, step, stop = vals
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def default_jobs():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def load_constellation(path, ctx):
    ctx.inputs.append(path)
    try:
        return Constellation.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def constellation_record(c, snr_db=None, gmi=None):
    d = c.to_dict()
    if gmi is not None:
        d["gmi"] = {"value": gmi, "unit": "bits/symbol", "snr_db": snr_db}
    return json.dumps(d) + "\n"


def to_2d(gmi, n):
    return gmi * 2.0 / n


class RunContext:
    """Collects what a manifest needs while a command runs."""

    def __init__(self, args):
        self.args = args
        self.inputs = []
        self.outputs = []
        self.seeds = []

    def emit(self, path, text):
        """Write ``text`` atomically to ``path``; ``None`` or ``-`` means stdout."""
        if path in (None, "-"):
            sys.stdout.write(text)
            return
        atomic_write_text(path, text)
        self.outputs.append(path)


def write_manifest(ctx, argv, wall):
    args = ctx.args
    target = args.manifest
    if target is None and ctx.outputs:
        target = ctx.outputs[0] + ".manifest.json"
    if target is None:
        return None
    config = {k: v for k, v in vars(args).items() if k not in ("func", "manifest", "config")}
    manifest = {
        "command": args.command,
        "argv": list(argv),
        "config": config,
        "seeds": ctx.seeds,
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "inputs": {p: sha256_file(p) for p in ctx.inputs},
        "outputs": {p: sha256_file(p) for p in ctx.outputs},
        "wall_time_s": wall,
    }
    atomic_write_text(target, json.dumps(manifest, indent=2) + "\n")
    return target


# -- commands -----------------------------------------------------------------


def _make_2d(kind, M, rings, seed):
    if kind == "qam":
        return gen_qam(M)
    if kind == "apsk":
        return gen_apsk(M, rings)
    if kind == "psk":
        return gen_psk(M)
    return random_constellation(M, 2, seed)


def cmd_gen(args, ctx):
    if args.m_bits < 1:
        raise UsageError("--m-bits must be >= 1")
    M = 1 << args.m_bits
    try:
        if args.type == "random":
            c = random_constellation(M, args.dims, args.seed)
            ctx.seeds.append(args.seed)
        elif args.dims == 2:
            c = _make_2d(args.type, M, args.rings, args.seed)
        elif args.dims == 4:
            if args.m_bits % 2:
                raise UsageError("4D product constellations need an even --m-bits")
            half = _make_2d(args.type, 1 << (args.m_bits // 2), args.rings, args.seed)
            c = product4d(half, half)
        else:
            raise UsageError(f"--type {args.type} supports --dims 2 or 4")
    except ConstellationError as exc:
        raise UsageError(str(exc)) from exc
    ctx.emit(args.out, constellation_record(c))
    if args.csv:
        ctx.emit(args.csv, c.to_csv())
    log.info("generated %s M=%d N=%d", args.type, c.M, c.n)


def cmd_validate(args, ctx):
    ctx.inputs.append(args.file)
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
    try:
        c = Constellation.from_json(text)
    except ConstellationError as exc:
        print(f"INVALID {args.file}: {exc}")
        raise FailureError(str(exc)) from exc
    print(f"OK {args.file}: M={c.M} N={c.n} m={c.m} energy={c.energy()!r}")


def cmd_gmi(args, ctx):
    c = load_constellation(args.file, ctx)
    snrs = parse_snr(args.snr_db)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["snr_db", "gmi_bits_per_2d"]
    if args.mc_samples:
        header += ["mc_estimate", "mc_stderr"]
        ctx.seeds.append(args.seed)
    w.writerow(header)
    for s in snrs:
        noise = NoiseSpec(s)
        row = [repr(s), repr(to_2d(gmi_gh(c, noise, args.quad_nodes), c.n))]
        if args.mc_samples:
            est, se = gmi_mc(c, noise, args.mc_samples, args.seed)
            row += [repr(to_2d(est, c.n)), repr(to_2d(se, c.n))]
        w.writerow(row)
    ctx.emit(args.out, buf.getvalue())


def _sweep_point(task):
    path, snr, quad_nodes, opt_cfg = task
    c = Constellation.load(path)
    noise = NoiseSpec(snr)
    if opt_cfg is None:
        return to_2d(gmi_gh(c, noise, quad_nodes), c.n)
    from gsgmi.optimizer import optimize_direct

    return to_2d(optimize_direct(c, noise, opt_cfg).final_gmi, c.n)


def cmd_sweep(args, ctx):
    if not args.files:
        raise UsageError("sweep needs at least one constellation file")
    for f in args.files:
        load_constellation(f, ctx)  # validate up front
    snrs = parse_snr(args.snr_db)
    opt_cfg = _opt_config(args) if args.optimize else None
    tasks = [(f, s, args.quad_nodes, opt_cfg) for f in args.files for s in snrs]
    jobs = args.jobs or default_jobs()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            vals = list(ex.map(_sweep_point, tasks))
    else:
        vals = [_sweep_point(t) for t in tasks]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["file", "snr_db", "gmi_bits_per_2d", "optimized"])
    for (f, s, _, _), v in zip(tasks, vals):
        w.writerow([f, repr(s), repr(v), int(args.optimize)])
    ctx.emit(args.out, buf.getvalue())


def _schedule(args):
    from gsgmi.optimizer import parse_schedule

    if args.schedule is None:
        return None
    try:
        return parse_schedule(args.schedule, args.lr)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _opt_config(args):
    from gsgmi.optimizer import OptConfig

    try:
        return OptConfig(
            iterations=args.iters,
            lr=args.lr,
            schedule=_schedule(args),
            quad_nodes=args.quad_nodes,
            seed=args.seed,
            bsa_every=args.bsa_every,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _init_constellation(spec, M, n, seed, ctx):
    from gsgmi.optimizer import make_init

    if spec == "random" or spec == "qam" or spec.startswith("apsk"):
        try:
            c = make_init(spec, M, n, seed)
        except (ValueError, ConstellationError) as exc:
            raise UsageError(str(exc)) from exc
        if spec == "random":
            ctx.seeds.append(seed)
        return c
    c = load_constellation(spec, ctx)
    if (c.M, c.n) != (M, n):
        raise UsageError(f"{spec} has M={c.M}, N={c.n}; expected M={M}, N={n}")
    return c


def cmd_optimize(args, ctx):
    from gsgmi.optimizer import optimize_direct

    M = 1 << args.m_bits
    init = _init_constellation(args.init, M, args.dims, args.seed, ctx)
    noise = NoiseSpec(args.snr_db)
    cfg = _opt_config(args)
    run = optimize_direct(init, noise, cfg)
    ctx.emit(args.out, constellation_record(run.final, args.snr_db, run.final_gmi))
    if args.trace:
        ctx.emit(args.trace, run.trace_csv())
    print(
        f"optimize: GMI {to_2d(run.initial_gmi, init.n):.6f} -> "
        f"{to_2d(run.final_gmi, init.n):.6f} bits/2D in {run.wall_time:.1f} s",
        file=sys.stderr,
    )


def cmd_bsa(args, ctx):
    from gsgmi.optimizer import bsa

    c = load_constellation(args.file, ctx)
    noise = NoiseSpec(args.snr_db)
    before = gmi_gh(c, noise, args.quad_nodes)
    out = bsa(c, noise, args.quad_nodes)
    after = gmi_gh(out, noise, args.quad_nodes)
    ctx.emit(args.out, constellation_record(out, args.snr_db, after))
    print(
        f"bsa: GMI {to_2d(before, c.n):.6f} -> {to_2d(after, c.n):.6f} bits/2D",
        file=sys.stderr,
    )


def _train_config(args):
    from gsgmi.ae import TrainConfig

    try:
        return TrainConfig(
            steps=args.steps,
            batch=args.batch,
            lr=args.lr,
            schedule=_schedule(args),
            bsa_every=args.bsa_every,
            seed=args.seed,
            quad_nodes=args.quad_nodes,
            eval_every=args.eval_every,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_ae(args, ctx):
    from gsgmi import ae

    M = 1 << args.m_bits
    noise = NoiseSpec(args.snr_db)
    cfg = _train_config(args)
    ctx.seeds.append(args.seed)
    init_seed, train_seed = np.random.SeedSequence(args.seed).spawn(2)
    params = ae.glorot_init(ae.default_sizes(M, args.dims), np.random.default_rng(init_seed))
    if args.init != "glorot":
        if not args.init.startswith("prefit:"):
            raise UsageError("--init must be glorot or prefit:{qam|apsk:R|FILE}")
        target = _init_constellation(args.init[len("prefit:"):], M, args.dims, args.seed, ctx)
        params = ae.prefit(params, target)
    cfg.seed = int(train_seed.generate_state(1)[0])
    run = ae.ae_train(params, noise, cfg)
    ctx.emit(args.out, constellation_record(run.final, args.snr_db, run.final_gmi))
    if args.trace:
        ctx.emit(args.trace, run.trace_csv())
    print(
        f"ae: final GMI {to_2d(run.final_gmi, args.dims):.6f} bits/2D, "
        f"{run.swaps} relabelings, {run.wall_time:.1f} s",
        file=sys.stderr,
    )


def cmd_cdf(args, ctx):
    from gsgmi.optimizer import restart_cdf

    noise = NoiseSpec(args.snr_db)
    M = 1 << args.m_bits
    if args.lr is None:
        args.lr = 5e-4 if args.runner == "direct" else 1e-3
    cfg = _opt_config(args) if args.runner == "direct" else _train_config(args)
    jobs = args.jobs or default_jobs()
    try:
        rep = restart_cdf(args.init, args.runner, noise, args.runs, args.seed, M, args.dims, cfg, jobs)
    except (ValueError, ConstellationError) as exc:
        raise UsageError(str(exc)) from exc
    ctx.seeds.extend(rep.seeds)
    ctx.emit(args.out, rep.to_csv())
    print(
        f"cdf: {args.runs} {args.runner} runs, median {to_2d(rep.median(), args.dims):.6f} "
        f"bits/2D, {100 * rep.fraction_below_reference:.1f}% below Gray QAM "
        f"({to_2d(rep.reference, args.dims):.6f})",
        file=sys.stderr,
    )


def cmd_reach(args, ctx):
    from gsgmi import linkbudget as lb

    try:
        link = lb.GnLink(
            span_length=args.span_length,
            attenuation=args.attenuation,
            dispersion_beta2=args.beta2,
            gamma_nl=args.gamma,
            noise_figure=args.nf,
            symbol_rate=args.symbol_rate,
            wdm_channels=args.channels,
            channel_spacing=args.spacing,
            center_wavelength=args.wavelength,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not 0 < args.rate < 1:
        raise UsageError("--rate must lie in (0, 1)")
    named = []
    if args.baseline:
        named.append(("baseline", load_constellation(args.baseline, ctx)))
    named.append(("candidate", load_constellation(args.constellation, ctx)))
    results = [(name, lb.reach(link, c, args.rate, args.quad_nodes)) for name, c in named]
    base = results[0][1] if args.baseline else None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "required_snr_db", "p_opt_dbm", "spans", "spans_real", "reach_km",
                "increase_percent"])
    lines = [f"{'name':<10} {'req_snr_dB':>10} {'P_opt_dBm':>9} {'spans':>5} {'reach_km':>8} {'incr_%':>7}"]
    for name, r in results:
        inc = 100.0 * (r.spans_real - base.spans_real) / base.spans_real if base else float("nan")
        w.writerow([name, repr(r.required_snr_db), repr(r.optimal_launch_power_dbm), r.max_spans,
                    repr(r.spans_real), repr(r.reach_km), repr(inc)])
        lines.append(
            f"{name:<10} {r.required_snr_db:>10.3f} {r.optimal_launch_power_dbm:>9.2f} "
            f"{r.max_spans:>5d} {r.reach_km:>8.0f} {inc:>7.2f}"
        )
    print("\n".join(lines), file=sys.stderr)
    ctx.emit(args.out, buf.getvalue())


def cmd_replay(args, ctx):
    try:
        with open(args.manifest_file) as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read manifest {args.manifest_file}: {exc}") from exc
    for path, digest in manifest.get("inputs", {}).items():
        if sha256_file(path) != digest:
            raise FailureError(f"input {path} changed since the recorded run")
    expected = manifest.get("outputs", {})
    saved = {p: open(p, "rb").read() for p in expected if os.path.exists(p)}
    try:
        code = main(manifest["argv"], _manifest=False)
        if code:
            raise FailureError(f"replayed command exited with {code}")
        bad = [p for p, d in expected.items() if sha256_file(p) != d]
    finally:
        if args.check_only:
            for p, data in saved.items():
                atomic_write_bytes(p, data)
    if bad:
        raise FailureError("outputs differ from the manifest: " + ", ".join(bad))
    print(f"replay OK: {len(expected)} output(s) reproduced bit-exactly", file=sys.stderr)


def atomic_write_bytes(path, data):
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


# -- parser -------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--config", help="JSON file of option defaults (flags override it)")
    p.add_argument("--manifest", help="manifest path (default: <first output>.manifest.json)")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_train_opts(p, iters=1000):
    p.add_argument("--m-bits", type=int, default=4)
    p.add_argument("--dims", type=int, default=2, choices=(2, 4))
    p.add_argument("--snr-db", type=float, default=9.0)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--schedule", help="constant[:LR] | tri:LO:HI:PERIOD | cos:HI:PERIOD[:MULT]")
    p.add_argument("--bsa-every", type=int, default=0)
    p.add_argument("--quad-nodes", type=int)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="gsgmi", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"gsgmi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a labeled constellation")
    p.add_argument("--type", choices=("qam", "apsk", "psk", "random"), required=True)
    p.add_argument("--m-bits", type=int, required=True)
    p.add_argument("--rings", type=int, default=1)
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="JSON output (default stdout)")
    p.add_argument("--csv", help="also write label_bits,x1..xN CSV")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="check a constellation file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gmi", help="GMI of one constellation vs SNR")
    p.add_argument("file")
    p.add_argument("--snr-db", required=True, help="SNR or start:step:stop")
    p.add_argument("--quad-nodes", type=int)
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gmi)

    p = sub.add_parser("sweep", help="GMI vs SNR for several constellations")
    p.add_argument("files", nargs="*")
    p.add_argument("--snr-db", required=True, help="SNR or start:step:stop")
    p.add_argument("--quad-nodes", type=int)
    p.add_argument("--optimize", action="store_true", help="optimize at each SNR point")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--schedule")
    p.add_argument("--bsa-every", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, help=f"worker processes (default ${THREADS_ENV} or 1)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="direct gradient-ascent GMI optimization")
    _add_train_opts(p)
    p.add_argument("--init", default="qam", help="qam | apsk:R | random | FILE")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--out")
    p.add_argument("--trace", help="per-iteration GMI CSV")
    p.set_defaults(func=cmd_optimize, lr=5e-4)

    p = sub.add_parser("bsa", help="relabel a constellation with the binary switching algorithm")
    p.add_argument("file")
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--quad-nodes", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bsa)

    p = sub.add_parser("ae", help="train the autoencoder transmitter")
    _add_train_opts(p)
    p.add_argument("--init", default="glorot", help="glorot | prefit:{qam|apsk:R|FILE}")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--batch", type=int, default=480)
    p.add_argument("--eval-every", type=int, default=200)
    p.add_argument("--out")
    p.add_argument("--trace", help="GMI-vs-step CSV")
    p.set_defaults(func=cmd_ae, lr=1e-3)

    p = sub.add_parser("cdf", help="restart experiment: CDF of final GMIs")
    _add_train_opts(p)
    p.add_argument("--runner", choices=("direct", "ae"), default="ae")
    p.add_argument("--init", default="random", help="random | qam | apsk:R")
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--iters", type=int, default=1000, help="direct runner iterations")
    p.add_argument("--steps", type=int, default=2000, help="ae runner steps")
    p.add_argument("--batch", type=int, default=480)
    p.add_argument("--eval-every", type=int, default=0)
    p.add_argument("--jobs", type=int, help=f"worker processes (default ${THREADS_ENV} or 1)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("reach", help="GN-model reach of a constellation")
    p.add_argument("--constellation", required=True)
    p.add_argument("--baseline")
    p.add_argument("--rate", type=float, default=0.8)
    p.add_argument("--quad-nodes", type=int)
    p.add_argument("--span-length", type=float, default=80.0, help="km")
    p.add_argument("--attenuation", type=float, default=0.2, help="dB/km")
    p.add_argument("--beta2", type=float, default=-21.7, help="ps^2/km")
    p.add_argument("--gamma", type=float, default=1.3, help="1/(W km)")
    p.add_argument("--nf", type=float, default=4.5, help="EDFA noise figure, dB")
    p.add_argument("--symbol-rate", type=float, default=45.0, help="GBaud")
    p.add_argument("--channels", type=int, default=11)
    p.add_argument("--spacing", type=float, default=50.0, help="GHz")
    p.add_argument("--wavelength", type=float, default=1550.0, help="nm")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("replay", help="re-run a manifest and verify identical outputs")
    p.add_argument("manifest_file")
    p.add_argument("--check-only", action="store_true", help="restore the original outputs afterwards")
    p.set_defaults(func=cmd_replay)

    for sp in sub.choices.values():
        _add_common(sp)
    return parser, sub


def _apply_config(parser, sub, argv):
    """Re-parse with the ``--config`` file as subcommand defaults."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    sp = sub.choices[args.command]
    known = {a.dest for a in sp._actions}
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    unknown = sorted(set(cfg) - known - {"command"})
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    cfg.pop("command", None)
    sp.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv=None, _manifest=True):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, sub = build_parser()
    try:
        args = _apply_config(parser, sub, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"gsgmi: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx = RunContext(args)
    t0 = time.perf_counter()
    try:
        args.func(args, ctx)
    except UsageError as exc:
        print(f"gsgmi {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except FailureError as exc:
        print(f"gsgmi {args.command}: failed: {exc}", file=sys.stderr)
        return 3
    except (ConstellationError, ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"gsgmi {args.command}: failed: {exc}", file=sys.stderr)
        return 3
    if _manifest and args.command != "replay":
        write_manifest(ctx, argv, time.perf_counter() - t0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
