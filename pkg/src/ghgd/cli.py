"""Command-line front end.

    ghgd stats --n 4 --m 2,2 --t 2
    ghgd pmf --n 4 --m 2,2
    ghgd crosscheck --n 4 --m 2,2,2
    ghgd --batch jobs.ndjson

Exit status: 0 ok, 1 usage or validation error, 2 enumeration budget refused,
3 crosscheck mismatch.  JSON is the normative output; exact rationals are
written as ``{"exact": "num/den", "approx": "..."}`` where ``approx`` carries 12
significant digits and is informational only.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from . import bounds, moments, oracle
from .combinatorics import (
    EXACT_T,
    MODES,
    GHGDError,
    Instance,
    pmf_full_overlap,
)

COMMANDS = ("stats", "pmf", "bound", "significance", "oracle", "simulate", "crosscheck")
FORMATS = ("json", "csv", "plain")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_MISMATCH = 3


class UsageError(GHGDError):
    pass


@dataclass
class JobSpec:
    command: str
    instance: Instance
    t: int
    mode: str = EXACT_T
    v: Optional[int] = None
    trials: int = 10_000
    seed: int = 0
    alpha: float = 0.05
    observed_k: Optional[int] = None
    budget: Optional[int] = None
    format: str = "json"
    all_t: bool = False


_JOB_KEYS = {
    "command", "n", "m", "t", "mode", "v", "trials", "seed",
    "alpha", "observed_k", "budget", "format",
}


def _int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"{name} must be an integer, got {value!r}")
    return value


def make_job(record: Dict[str, Any]) -> JobSpec:
    """Validate one job description (flags or a batch record) into a JobSpec."""
    unknown = set(record) - _JOB_KEYS
    if unknown:
        raise UsageError(f"unknown field(s): {', '.join(sorted(unknown))}")
    command = record.get("command")
    if command not in COMMANDS:
        raise UsageError(f"command must be one of {', '.join(COMMANDS)}, got {command!r}")
    if record.get("n") is None or record.get("m") is None:
        raise UsageError("both n and m are required")
    m = record["m"]
    if isinstance(m, str):
        m = _parse_sizes(m)
    if not isinstance(m, list):
        raise UsageError(f"m must be a list of integers, got {m!r}")
    inst = Instance(_int(record["n"], "n"), [_int(x, f"m[{i}]") for i, x in enumerate(m)])

    all_t = record.get("t") is None
    t = inst.T if all_t else _int(record["t"], "t")
    if not 0 <= t <= inst.T:
        raise UsageError(f"t must be in 0..{inst.T}, got {t}")
    mode = record.get("mode") or EXACT_T
    if mode not in MODES:
        raise UsageError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    fmt = record.get("format") or "json"
    if fmt not in FORMATS:
        raise UsageError(f"format must be one of {', '.join(FORMATS)}, got {fmt!r}")

    job = JobSpec(command, inst, t, mode, format=fmt, all_t=all_t and command == "crosscheck")
    if record.get("v") is not None:
        job.v = _int(record["v"], "v")
        if job.v < 0:
            raise UsageError("v must be >= 0")
        if job.v > 2 and t != inst.T and command == "stats":
            raise UsageError("moments above order 2 are only available for t == T")
    if record.get("trials") is not None:
        job.trials = _int(record["trials"], "trials")
        if job.trials < 1:
            raise UsageError("trials must be >= 1")
    if record.get("seed") is not None:
        job.seed = _int(record["seed"], "seed")
        if job.seed < 0:
            raise UsageError("seed must be >= 0")
    if record.get("alpha") is not None:
        alpha = record["alpha"]
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not 0 < alpha < 1:
            raise UsageError(f"alpha must be in (0, 1), got {alpha!r}")
        job.alpha = float(alpha)
    if record.get("observed_k") is not None:
        job.observed_k = _int(record["observed_k"], "observed_k")
        if job.observed_k < 0:
            raise UsageError("observed_k must be >= 0")
    if command == "significance" and job.observed_k is None:
        raise UsageError("significance needs observed_k")
    if record.get("budget") is not None:
        job.budget = _int(record["budget"], "budget")
    return job


def _parse_sizes(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse subset sizes {text!r}") from None


def parse_batch(stream: TextIO) -> List[JobSpec]:
    """Parse newline-delimited JSON job records; all or nothing."""
    jobs = []
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise UsageError("record must be a JSON object")
            jobs.append(make_job(record))
        except (ValueError, GHGDError) as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
    return jobs


# -- serialization ----------------------------------------------------------


def approx(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 12
        ctx.rounding = ROUND_HALF_EVEN
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def rational(x) -> Dict[str, str]:
    x = Fraction(x)
    return {"exact": f"{x.numerator}/{x.denominator}", "approx": approx(x)}


def _number(x):
    if isinstance(x, float):
        return x
    return rational(x)


def _instance_fields(job: JobSpec) -> Dict[str, Any]:
    return {"n": job.instance.n, "m": list(job.instance.m)}


# -- commands -------------------------------------------------------------------


def _stats(job: JobSpec) -> Tuple[int, Dict[str, Any]]:
    r = moments.moment_report(job.instance, job.t, job.mode, job.v)
    out = {
        "t": r.t, "mode": r.mode,
        "mean": rational(r.mean),
        "second_moment": rational(r.second_moment),
        "variance": rational(r.variance),
    }
    if job.v is not None and job.t == job.instance.T:
        out["raw_moments"] = [rational(x) for x in r.raw_moments]
        out["central_moments"] = [rational(x) for x in r.central_moments]
    return EXIT_OK, out


def _table(dist) -> Dict[str, Any]:
    return {
        "kind": dist.kind, "t": dist.t,
        "rows": [{"k": k, "p": rational(p)} for k, p in enumerate(dist.probs)],
    }


def _pmf(job: JobSpec) -> Tuple[int, Dict[str, Any]]:
    # only the full-overlap pmf has a closed form; other levels are enumerated
    if job.t == job.instance.T:
        dist = pmf_full_overlap(job.instance)
        return EXIT_OK, {"source": "recursion", **_table(dist)}
    dist = oracle.enumerate_distribution(job.instance, job.t, job.mode, job.budget)
    return EXIT_OK, {"source": "enumeration", **_table(dist)}


def _oracle(job: JobSpec) -> Tuple[int, Dict[str, Any]]:
    dist = oracle.enumerate_distribution(job.instance, job.t, job.mode, job.budget)
    return EXIT_OK, _table(dist)


def _report(r: bounds.BoundReport) -> Dict[str, Any]:
    out = {
        "mean": _number(r.mean),
        "variance": _number(r.variance),
        "method": r.method,
        "threshold": r.threshold,
        "bound": _number(r.bound),
        "valid": r.valid,
        "reason": r.reason,
    }
    if r.approximate is not None:
        out["approximate"] = r.approximate
    return out


def _bound(job: JobSpec) -> Tuple[int, Dict[str, Any]]:
    mean = moments.mean_for(job.instance, job.t, job.mode)
    var = moments.variance_for(job.instance, job.t, job.mode)
    out = _report(bounds.chebyshev_p_at_least_one(mean, var))
    out["mean"], out["variance"] = rational(mean), rational(var)
    thresholds = {
        method: bounds.max_mean_for_alpha(job.alpha, method)
        for method in (bounds.CHEBYSHEV_EQ14, bounds.VYSOCHANSKII_PETUNIN)
    }
    out["alpha"] = job.alpha
    out["max_mean"] = thresholds
    out["below_max_mean"] = {k: float(mean) <= v for k, v in thresholds.items()}
    return EXIT_OK, out


def _significance(job: JobSpec) -> Tuple[int, Dict[str, Any]]:
    r = bounds.overlap_significance(job.instance, job.t, job.mode, job.observed_k, job.budget)
    return EXIT_OK, {"t": job.t, "mode": job.mode, **_report(r)}


def _simulate(job: JobSpec) -> Tuple[int, Dict[str, Any]]:
    s = oracle.simulate(job.instance, job.t, job.mode, job.trials, job.seed)
    return EXIT_OK, {
        "t": job.t, "mode": job.mode, "trials": s.trials, "seed": s.seed,
        "mean": rational(s.mean), "variance": rational(s.variance),
        "min": s.min, "max": s.max,
    }


def crosscheck_rows(job: JobSpec) -> List[Dict[str, Any]]:
    inst = job.instance
    levels = range(inst.T + 1) if job.all_t else [job.t]
    rows = []

    def add(quantity, t, mode, formula, truth):
        rows.append({
            "quantity": quantity, "t": t, "mode": mode,
            "formula": rational(formula), "oracle": rational(truth),
            "equal": formula == truth,
        })

    for t in levels:
        for mode in MODES:
            dist = oracle.enumerate_distribution(inst, t, mode, job.budget)
            add("mean", t, mode, moments.mean_for(inst, t, mode), dist.mean())
            add("variance", t, mode, moments.variance_for(inst, t, mode), dist.variance())
        if t == inst.T:
            dist = oracle.enumerate_distribution(inst, t, EXACT_T, job.budget)
            full = pmf_full_overlap(inst).probs
            for k, p in enumerate(dist.probs):
                add(f"pmf[{k}]", t, EXACT_T, full[k] if k < len(full) else Fraction(0), p)
            top = job.v if job.v is not None else 4
            for v in range(1, top + 1):
                add(f"raw_moment[{v}]", t, EXACT_T, moments.raw_moment_full(inst, v), dist.raw_moment(v))
                add(f"central_moment[{v}]", t, EXACT_T, moments.central_moment_full(inst, v),
                    dist.central_moment(v))
    return rows


def _crosscheck(job: JobSpec) -> Tuple[int, Dict[str, Any]]:
    rows = crosscheck_rows(job)
    ok = all(r["equal"] for r in rows)
    return (EXIT_OK if ok else EXIT_MISMATCH), {"all_equal": ok, "rows": rows}


_HANDLERS = {
    "stats": _stats,
    "pmf": _pmf,
    "bound": _bound,
    "significance": _significance,
    "oracle": _oracle,
    "simulate": _simulate,
    "crosscheck": _crosscheck,
}


# -- rendering ----------------------------------------------------------------------


def _flat(value) -> str:
    if isinstance(value, dict) and "exact" in value:
        return value["exact"]
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def _csv_rows(payload: Dict[str, Any]) -> Tuple[List[str], List[List[str]]]:
    command = payload["command"]
    if "error" in payload:
        return ["command", "error"], [[command, payload["error"]]]
    if command in ("pmf", "oracle"):
        return ["k", "p_exact", "p_approx"], [
            [str(r["k"]), r["p"]["exact"], r["p"]["approx"]] for r in payload["rows"]
        ]
    if command == "crosscheck":
        return ["quantity", "t", "mode", "formula", "oracle", "equal"], [
            [r["quantity"], str(r["t"]), r["mode"], r["formula"]["exact"],
             r["oracle"]["exact"], _flat(r["equal"])]
            for r in payload["rows"]
        ]
    if command == "stats":
        rows = [[q, payload[q]["exact"], payload[q]["approx"]]
                for q in ("mean", "second_moment", "variance")]
        for name in ("raw_moments", "central_moments"):
            for v, x in enumerate(payload.get(name, [])):
                rows.append([f"{name[:-1]}[{v}]", x["exact"], x["approx"]])
        return ["quantity", "exact", "approx"], rows
    return ["field", "value"], [[k, _flat(v)] for k, v in sorted(payload.items())]


def render(payload: Dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    if fmt == "csv":
        header, rows = _csv_rows(payload)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    header, rows = _csv_rows(payload)
    lines = [f"# {payload['command']} n={payload['n']} m={payload['m']}"]
    for row in rows:
        if header == ["field", "value"]:
            lines.append(f"{row[0]}: {row[1]}")
        else:
            lines.append("  ".join(f"{h}={c}" for h, c in zip(header, row)))
    return "\n".join(lines) + "\n"


def run(job: JobSpec) -> Tuple[int, str]:
    """Execute one job; returns the exit status and the rendered report."""
    header = {"command": job.command, **_instance_fields(job)}
    try:
        code, body = _HANDLERS[job.command](job)
    except oracle.EnumerationBudgetExceeded as exc:
        code, body = EXIT_BUDGET, {
            "error": str(exc), "configurations": exc.configurations, "budget": exc.budget,
        }
    except GHGDError as exc:
        code, body = EXIT_USAGE, {"error": str(exc)}
    return code, render({**header, **body}, job.format)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ghgd", description="Exact overlap statistics for T random subsets.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--n", type=int, help="population size")
    p.add_argument("--m", help="comma-separated subset sizes, e.g. 2,2,3")
    p.add_argument("--t", type=int, help="overlap level (default T; crosscheck: all levels)")
    p.add_argument("--mode", choices=MODES, default=EXACT_T)
    p.add_argument("--v", type=int, help="highest moment order (t == T only above 2)")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--observed-k", type=int, dest="observed_k")
    p.add_argument("--budget", type=int, help="enumeration budget in configurations")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--batch", metavar="FILE", help="newline-delimited JSON jobs; '-' for stdin")
    return p


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
         stdin: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.batch is not None:
            if args.command is not None:
                raise UsageError("give either a command or --batch, not both")
            if args.batch == "-":
                jobs = parse_batch(stdin or sys.stdin)
            else:
                with open(args.batch, encoding="utf-8") as fh:
                    jobs = parse_batch(fh)
        else:
            if args.command is None:
                raise UsageError("a command or --batch is required")
            record = {k: getattr(args, k) for k in _JOB_KEYS - {"command"}}
            record["command"] = args.command
            jobs = [make_job(record)]
    except (GHGDError, OSError) as exc:
        print(f"ghgd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    status = EXIT_OK
    for job in jobs:
        code, text = run(job)
        stdout.write(text)
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())
