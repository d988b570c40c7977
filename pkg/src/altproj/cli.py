"""Command-line surface: system files in JSON, iteration traces in CSV.

Subcommands:

* ``gen``        emit a system file for a named corpus family
* ``angles``     angle parameters of a system file, as JSON
* ``iterate``    per-pass or per-step error trace of a projection iteration
* ``bounds``     margins of every applicable convergence bound, as JSON
* ``probe-slow`` finite-horizon slow-convergence construction

All commands are deterministic given their flags.  Exit codes: 0 success or
informative outcome, 1 usage error (bad flags or malformed input), 2
numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .angles import angle_report
from .corpus import FamilySpec
from .diagnostics import bound_report
from .dynamics import IndexSchedule, SlowSequence, iterate_vector, slow_vector_probe
from .numerics import NumericalFailure
from .subspace import Subspace, SubspaceSystem

__all__ = ["main", "load_system", "dump_system"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def dump_system(system: SubspaceSystem) -> str:
    """Serialize a system to the JSON schema used by every subcommand.

    The document is {"dim": d, "subspaces": [{"name", "vectors"}]} with one
    spanning vector per row; bases round-trip exactly.
    """
    doc = {
        "dim": system.ambient_dim,
        "subspaces": [
            {"name": s.name, "vectors": [list(map(float, row)) for row in s.basis.T]}
            for s in system.subspaces
        ],
    }
    return json.dumps(doc, indent=2)


def load_system(text: str) -> SubspaceSystem:
    """Parse a system file; spanning sets are orthonormalized on load."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dim" not in doc or "subspaces" not in doc:
        raise ValueError('system file needs "dim" and "subspaces" keys')
    dim = int(doc["dim"])
    if dim < 1:
        raise ValueError("dim must be >= 1")
    entries = doc["subspaces"]
    if not isinstance(entries, list) or len(entries) < 2:
        raise ValueError("system file needs at least two subspaces")
    subs = []
    for entry in entries:
        vectors = entry.get("vectors", [])
        for row in vectors:
            if len(row) != dim:
                raise ValueError("every vector row must have length dim")
        subs.append(Subspace.from_vectors(vectors, ambient_dim=dim, name=str(entry.get("name", ""))))
    return SubspaceSystem(tuple(subs))


def _read_system(path: str) -> SubspaceSystem:
    with open(path, "r", encoding="utf-8") as handle:
        return load_system(handle.read())


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _write_trace(path: str | None, steps, measured, bounds: dict) -> None:
    header = ["n", "measured", *bounds.keys()]
    lines = [",".join(header)]
    columns = [np.asarray(measured, dtype=float)] + [np.asarray(v, dtype=float) for v in bounds.values()]
    for i, n in enumerate(steps):
        row = [str(int(n))] + [repr(float(col[i])) for col in columns]
        lines.append(",".join(row))
    _write_output("\n".join(lines), path)


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise ValueError(f"{flag} expects a comma-separated list of integers") from exc


_FAMILY_IDS = {
    "example3": "example3",
    "two-lines": "two_lines",
    "tilted": "tilted_pairs",
    "random": "random",
    "common-core": "common_core",
}


def _cmd_gen(args) -> int:
    family = _FAMILY_IDS[args.family]
    spec = FamilySpec(
        family=family,
        dim=args.dim,
        theta=args.theta,
        k=args.k,
        angle_rule=args.rule,
        dims=_parse_int_list(args.dims, "--dims") if args.dims else None,
        seed=args.seed,
        core_dim=args.core_dim,
    )
    _write_output(dump_system(spec.build()), args.output)
    return 0


def _inclination_payload(report):
    if report.inclination is None:
        return None
    return {
        "lower": report.inclination.lower,
        "upper": report.inclination.upper,
        "estimate": report.inclination.estimate,
        "certified": report.inclination.certified,
    }


def _cmd_angles(args) -> int:
    system = _read_system(args.system)
    report = angle_report(system)
    payload = {
        "c0": report.c0,
        "c": report.c,
        "kappa0": report.kappa0,
        "kappa": report.kappa,
        "pairwise": [[float(v) for v in row] for row in report.pairwise_dixmier_reduced],
        "prefix": [float(v) for v in report.prefix_friedrichs],
        "inclination": _inclination_payload(report),
        "degenerate": report.degenerate,
    }
    _write_output(json.dumps(payload, indent=2), args.output)
    return 0


def _cmd_iterate(args) -> int:
    system = _read_system(args.system)
    n = system.n_subspaces
    if args.order == "cyclic":
        schedule = IndexSchedule.cyclic(n)
    elif args.order == "random":
        schedule = IndexSchedule.random(n, seed=args.seed, coverage_window=args.coverage_window)
    else:
        if not args.indices:
            raise ValueError("explicit order needs --indices")
        schedule = IndexSchedule.explicit(_parse_int_list(args.indices, "--indices"), n)
    if args.x0 == "random":
        rng = np.random.default_rng(args.seed)
        x0 = rng.standard_normal(system.ambient_dim)
    else:
        x0 = np.array([float(part) for part in args.x0.split(",")])
        if x0.shape[0] != system.ambient_dim:
            raise ValueError("--x0 coordinates must match the ambient dimension")
    trace = iterate_vector(system, x0, schedule, args.iters)
    _write_trace(args.trace, trace.steps, trace.errors, trace.bounds)
    return 0


def _cmd_bounds(args) -> int:
    system = _read_system(args.system)
    report = bound_report(system, n_max=args.iters)
    entries = []
    series = {}
    steps = None
    for check in report.entries:
        entry = {
            "name": check.name,
            "margin": check.margin,
            "satisfied": check.satisfied,
            "note": check.note,
        }
        if check.max_abs_deviation is not None:
            entry["max_abs_deviation"] = check.max_abs_deviation
        measured = np.asarray(check.measured, dtype=float)
        bound = np.asarray(check.bound, dtype=float)
        if measured.ndim == 0:
            entry["measured"] = float(measured)
            entry["bound"] = float(bound)
        elif measured.shape[0] == args.iters and check.name in ("corMain", "DeHu"):
            steps = np.arange(1, args.iters + 1)
            series.setdefault("measured_series", measured)
            series[check.name] = bound
        entries.append(entry)
    payload = {"degenerate": report.degenerate, "entries": entries}
    _write_output(json.dumps(payload, indent=2), args.output)
    if args.trace and steps is not None:
        measured_series = series.pop("measured_series")
        _write_trace(args.trace, steps, measured_series, series)
    return 0


def _cmd_probe_slow(args) -> int:
    if args.seq.startswith("pow:"):
        seq = SlowSequence.power(float(args.seq.split(":", 1)[1]))
    elif args.seq == "log":
        seq = SlowSequence.log()
    elif args.seq.startswith("file:"):
        with open(args.seq.split(":", 1)[1], "r", encoding="utf-8") as handle:
            seq = SlowSequence.explicit([float(tok) for tok in handle.read().split()])
    else:
        raise ValueError(f"unknown --seq form {args.seq!r}; use pow:<p>, log or file:<path>")
    if args.rule != "inv-k":
        raise ValueError("only the inv-k angle rule is available from the command line")
    angles = 1.0 / np.arange(1, args.k + 1)
    result = slow_vector_probe(angles, seq, args.horizon)
    payload = {
        "x": [float(v) for v in result.x],
        "success": result.success,
        "achieved_horizon": result.achieved_horizon,
    }
    _write_output(json.dumps(payload, indent=2), args.output)
    if args.trace:
        _write_trace(args.trace, result.trace.steps, result.trace.errors, result.trace.bounds)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="altproj", description="subspace angles and alternating-projection diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a system file for a named family")
    gen.add_argument("--family", required=True,
                     choices=["example3", "two-lines", "tilted", "random", "common-core"])
    gen.add_argument("--dim", type=int, help="ambient dimension")
    gen.add_argument("--theta", type=float, help="angle in radians (two-lines)")
    gen.add_argument("--k", type=int, help="number of tilted blocks")
    gen.add_argument("--rule", default="inv-k", help="angle rule for tilted blocks")
    gen.add_argument("--dims", help="comma-separated subspace dimensions")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--core-dim", type=int, help="dimension of the forced common core")
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=_cmd_gen)

    ang = sub.add_parser("angles", help="angle parameters of a system file")
    ang.add_argument("system")
    ang.add_argument("-o", "--output")
    ang.set_defaults(func=_cmd_angles)

    it = sub.add_parser("iterate", help="projection-iteration error trace")
    it.add_argument("system")
    it.add_argument("--order", choices=["cyclic", "random", "explicit"], default="cyclic")
    it.add_argument("--seed", type=int, default=0)
    it.add_argument("--coverage-window", type=int)
    it.add_argument("--indices", help="comma-separated 1-based indices for explicit order")
    it.add_argument("--x0", default="random", help='"random" or comma-separated coordinates')
    it.add_argument("--iters", type=int, default=100)
    it.add_argument("--trace", help="CSV output path (stdout when omitted)")
    it.set_defaults(func=_cmd_iterate)

    bnd = sub.add_parser("bounds", help="convergence-bound margins")
    bnd.add_argument("system")
    bnd.add_argument("--iters", type=int, default=100)
    bnd.add_argument("--trace", help="CSV path for the per-iteration bound curves")
    bnd.add_argument("-o", "--output")
    bnd.set_defaults(func=_cmd_bounds)

    probe = sub.add_parser("probe-slow", help="finite-horizon slow-convergence probe")
    probe.add_argument("--k", type=int, required=True)
    probe.add_argument("--rule", default="inv-k")
    probe.add_argument("--seq", default="pow:0.5", help="pow:<p>, log, or file:<path>")
    probe.add_argument("--horizon", type=int, required=True)
    probe.add_argument("--trace", help="CSV path for the error-versus-target trace")
    probe.add_argument("-o", "--output")
    probe.set_defaults(func=_cmd_probe_slow)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"altproj: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"altproj: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
