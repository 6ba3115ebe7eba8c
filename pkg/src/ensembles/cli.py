"""``ensembles`` command-line interface.

Exit codes: 0 success / all checks passed, 1 a verification check failed,
2 usage error (bad arguments, invalid parameters, unwritable output).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import __version__, ewens, kernels, measures, pdirichlet, plancherel
from .combinat import Partition, partitions, partitions_up_to
from .rng import chunk_plan, stream
from .suites import SUITES, run_suite

CHUNK = 1000


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output helpers


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    return repr(float(x))


def _format(args, allowed: tuple[str, ...]) -> str:
    fmt = args.format or allowed[0]
    if fmt not in allowed:
        raise UsageError(f"{args.command} supports --format {', '.join(allowed)}; got {fmt}")
    return fmt


def emit_histogram(samples, bins: int, out=None, lo: float | None = None, hi: float | None = None) -> list[tuple]:
    """Fixed-width histogram as CSV rows ``bin_lo, bin_hi, count, density``.

    ``out`` may be a path, a writable text file, or ``None`` (rows only).
    """
    if bins < 1:
        raise ValueError("need at least one bin")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("cannot histogram an empty sample")
    lo = float(x.min()) if lo is None else float(lo)
    hi = float(x.max()) if hi is None else float(hi)
    if hi <= lo:
        hi = lo + 1.0
    counts, edges = np.histogram(x, bins=bins, range=(lo, hi))
    width = (hi - lo) / bins
    rows = [(_fmt(a), _fmt(b), int(c), _fmt(c / (x.size * width))) for a, b, c in zip(edges[:-1], edges[1:], counts)]
    if out is not None:
        text = _csv(("bin_lo", "bin_hi", "count", "density"), rows)
        if hasattr(out, "write"):
            out.write(text)
        else:
            _write(text, out)
    return rows


def _chunked(count: int, threads: int, work: Callable[[int, int], list]) -> list:
    """Run ``work(chunk_index, size)`` over the chunk plan; results are merged in chunk order."""
    plan = chunk_plan(count, CHUNK)
    if threads <= 1 or len(plan) <= 1:
        parts = [work(c, size) for c, size in plan]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda p: work(*p), plan))
    return [item for part in parts for item in part]


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _half_integer(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# --------------------------------------------------------------------------
# commands


def cmd_sample_ewens(args) -> int:
    fmt = _format(args, ("jsonl", "json"))
    if args.n < 0 or args.count < 0:
        raise UsageError("--n and --count must be nonnegative")

    def work(chunk: int, size: int) -> list:
        gen = stream(args.seed, "ewens", chunk)
        out = []
        for _ in range(size):
            s = ewens.sample_ewens(args.n, args.theta, gen)
            out.append({"images": s.to_json(), "cycle_type": list(ewens.cycle_type(s))})
        return out

    records = _chunked(args.count, args.threads, work)
    if fmt == "json":
        text = _json(records)
    else:
        text = "".join(json.dumps(r) + "\n" for r in records)
    _write(text, args.out)
    return 0


def cmd_sample_pd(args) -> int:
    fmt = _format(args, ("csv", "json"))
    if args.k < 1 or args.count < 0:
        raise UsageError("--k must be positive and --count nonnegative")
    sampler = pdirichlet.SAMPLERS[args.method]

    def work(chunk: int, size: int) -> list:
        return list(sampler(args.theta, args.k, size, stream(args.seed, "pdirichlet", chunk)))

    rows = _chunked(args.count, args.threads, work)
    if args.hist:
        emit_histogram([r[0] for r in rows], args.hist, args.out or "-", 0.0, 1.0)
        return 0
    if fmt == "json":
        text = _json([[float(v) for v in r] for r in rows])
    else:
        text = _csv([f"x{i}" for i in range(1, args.k + 1)], ([_fmt(v) for v in r] for r in rows))
    _write(text, args.out)
    return 0


def _plancherel_stat(stat: str, lam: Partition):
    if stat == "shape":
        return list(lam)
    if stat == "lis":
        return lam[0] if lam else 0
    if stat == "edge":
        return plancherel.edge_statistic(lam, 1)[0]
    return plancherel.sup_distance_to_omega(lam)


def cmd_sample_plancherel(args) -> int:
    fmt = _format(args, ("csv", "json"))
    if args.n < 1 or args.count < 0:
        raise UsageError("--n must be positive and --count nonnegative")
    if args.hist and args.stats == "shape":
        raise UsageError("--hist needs a numeric statistic (lis, edge or supdist)")
    draw = plancherel.SAMPLERS[args.sampler]

    def work(chunk: int, size: int) -> list:
        gen = stream(args.seed, "plancherel", chunk)
        return [_plancherel_stat(args.stats, draw(args.n, gen)) for _ in range(size)]

    values = _chunked(args.count, args.threads, work)
    if args.hist:
        emit_histogram(values, args.hist, args.out or "-")
        return 0
    if fmt == "json":
        text = _json(values)
    else:
        cell = (lambda v: json.dumps(v)) if args.stats == "shape" else (lambda v: v if isinstance(v, int) else _fmt(v))
        text = _csv((args.stats,), ([cell(v)] for v in values))
    _write(text, args.out)
    return 0


def cmd_kernel(args) -> int:
    _format(args, ("json",))
    try:
        spec = kernels.KernelSpec(args.kind, args.params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.kind == "bessel":
        for v in (args.x, args.y):
            if v.denominator != 2:
                raise UsageError("Bessel kernel arguments are half-integers such as 1/2 or -3/2")
    elif args.x.denominator != 1 or args.y.denominator != 1:
        raise UsageError("sine kernel arguments are integers")
    value = spec(args.x, args.y)
    _write(_json({"kind": args.kind, "param": args.params, "x": str(args.x), "y": str(args.y), "value": value}), args.out)
    return 0


def cmd_zmeasure(args) -> int:
    fmt = _format(args, ("csv", "json") if args.emit == "weights" else ("json",))
    params = measures.ZParams(args.z, args.zp, args.xi)
    if not params.admissible():
        raise UsageError(f"parameters z={args.z}, z'={args.zp} fail the admissibility screen")
    try:
        if args.xi is None:
            shapes = list(partitions(args.n))
            weights = [float(measures.zmeasure_weight(lam, args.z, args.zp)) for lam in shapes]
        else:
            shapes = list(partitions_up_to(args.n))
            weights = [float(measures.mixed_zmeasure_weight(lam, args.z, args.zp, args.xi)) for lam in shapes]
    except ZeroDivisionError as exc:
        raise UsageError(str(exc)) from None
    if args.emit == "weights":
        if fmt == "json":
            text = _json([{"shape": list(lam), "weight": w} for lam, w in zip(shapes, weights)])
        else:
            text = _csv(("shape", "weight"), ([json.dumps(list(lam)), _fmt(w)] for lam, w in zip(shapes, weights)))
        _write(text, args.out)
        return 0
    report = {"n": args.n, "z": args.z, "zp": args.zp, "xi": args.xi, "admissible": True, "total": math.fsum(weights)}
    if args.xi is None:
        scale = abs(float(measures.rising_factorial(args.z * args.zp, args.n))) * math.factorial(args.n)
        report["identity_relative_residual"] = abs(float(measures.zmeasure_identity_residual(args.n, args.z, args.zp))) / scale
        ok = abs(report["total"] - 1.0) < 1e-10
    else:
        tail = measures.negative_binomial_tail(args.n, args.z * args.zp, args.xi)
        report["negative_binomial_tail"] = tail
        ok = abs(1.0 - report["total"] - tail) < 1e-10
    report["status"] = "pass" if ok else "fail"
    _write(_json(report), args.out)
    return 0 if ok else 1


def _load_spec(text: str) -> dict:
    try:
        if text.startswith("@"):
            with open(text[1:]) as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read specialization: {exc}") from None


def cmd_schur(args) -> int:
    fmt = _format(args, ("csv", "json"))
    data = _load_spec(args.spec)
    closed = None
    try:
        if "phi" in data:
            phi = measures.Specialization.from_json(data["phi"])
            psi = measures.Specialization.from_json(data["psi"])
        elif data.get("kind") == "zxi":
            phi = measures.Specialization.from_json(data, "z")
            psi = measures.Specialization.from_json(data, "zp")
            closed = measures.zxi_normalization(data["z"], data["zp"], data["xi"])
        else:
            phi = psi = measures.Specialization.from_json(data)
        shapes = list(partitions_up_to(args.lmax))
        weights = [measures.schur_weight(lam, phi, psi) for lam in shapes]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad specialization: {exc}") from None
    total = math.fsum(weights)
    constant = closed if closed is not None else total
    rows = [(list(lam), w, w / constant) for lam, w in zip(shapes, weights)]
    if fmt == "json":
        out = {"lmax": args.lmax, "truncated_sum": total, "closed_form": closed, "remainder": None if closed is None else closed - total}
        out["weights"] = [{"shape": s, "weight": w, "probability": p} for s, w, p in rows]
        text = _json(out)
    else:
        text = _csv(("shape", "weight", "probability"), ([json.dumps(s), _fmt(w), _fmt(p)] for s, w, p in rows))
    _write(text, args.out)
    return 0


def cmd_verify(args) -> int:
    _format(args, ("json",))
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    params = {}
    if args.suite == "determinantal":
        params = {"nu": args.nu, "window": args.window, "cutoff": args.cutoff, "tol": args.tol}
    reports = []
    for name in names:
        rep = run_suite(name, args.seed, **params)
        rep["checks"] = [c.to_json(args.timing) for c in rep["checks"]]
        reports.append(rep)
    body = reports[0] if len(reports) == 1 else {"status": "pass" if all(r["status"] == "pass" for r in reports) else "fail", "suites": reports}
    _write(_json(body), args.out)
    return 0 if body["status"] == "pass" else 1


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=7, help="master seed (default 7)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for chunked sampling")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv", "jsonl"), default=None)

    parser = argparse.ArgumentParser(prog="ensembles", description="Random permutations and random partitions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-ewens", parents=[common], help="Ewens-distributed permutations (jsonl)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_sample_ewens)

    p = sub.add_parser("sample-pd", parents=[common], help="Poisson-Dirichlet top atoms (csv)")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--method", choices=sorted(pdirichlet.SAMPLERS), default="stick")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--hist", type=int, default=0, metavar="BINS", help="emit a histogram of x1 instead")
    p.set_defaults(func=cmd_sample_pd)

    p = sub.add_parser("sample-plancherel", parents=[common], help="Plancherel diagrams and statistics (csv)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--sampler", choices=sorted(plancherel.SAMPLERS), default="rsk")
    p.add_argument("--stats", choices=("shape", "lis", "edge", "supdist"), default="shape")
    p.add_argument("--hist", type=int, default=0, metavar="BINS", help="emit a histogram of the statistic instead")
    p.set_defaults(func=cmd_sample_plancherel)

    p = sub.add_parser("kernel", parents=[common], help="evaluate a correlation kernel")
    p.add_argument("action", choices=("eval",))
    p.add_argument("--kind", choices=("bessel", "sine"), required=True)
    p.add_argument("--params", "--param", dest="params", type=float, required=True, help="nu for bessel, a for sine")
    p.add_argument("--x", type=_half_integer, required=True)
    p.add_argument("--y", type=_half_integer, required=True)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("zmeasure", parents=[common], help="z-measure and mixed z-measure weights")
    p.add_argument("--n", type=int, required=True, help="size, or the largest size when --xi is given")
    p.add_argument("--z", type=_number, required=True)
    p.add_argument("--zp", type=_number, required=True)
    p.add_argument("--xi", type=float, default=None)
    p.add_argument("--emit", choices=("weights", "report"), default="weights")
    p.set_defaults(func=cmd_zmeasure)

    p = sub.add_parser("schur", parents=[common], help="Schur-measure weights from a specialization")
    p.add_argument("--spec", required=True, help="JSON text or @file")
    p.add_argument("--lmax", type=int, required=True)
    p.set_defaults(func=cmd_schur)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite and emit a JSON report")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--nu", type=float, default=2.0)
    p.add_argument("--window", type=int, default=6)
    p.add_argument("--cutoff", type=int, default=30)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--timing", action="store_true", help="include wall-clock runtimes (breaks byte-identity)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ensembles: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ensembles: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
