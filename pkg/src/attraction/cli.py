"""Command-line entry point.

Every command prints one JSON report on stdout::

    {"command": [...], "input_digest": "<sha256>", "result": {...}, "version": "..."}

Tabular commands also accept ``--format csv`` and then print bare CSV.
Exit status is 0 on success, 2 on invalid input, 3 when an instance exceeds
its enumeration cap. With ``--exact`` numbers are read as rationals and
non-integral results are printed as ``"p/q"`` strings.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import date
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from attraction import __version__
from attraction.analytics import (
    Holiday,
    SyntheticSpec,
    best_response_rate,
    decay_stats,
    equilibrium_release_slots,
    generate_synthetic_panel,
    infer_popularity,
    lead_time_table,
    partition_slots,
    read_decisions,
    read_records,
    theater_rationality,
    write_records,
)
from attraction.carryover import (
    carryover_dynamics,
    carryover_utilities,
    homogeneous_potential,
    is_carryover_nash,
)
from attraction.equilibrium import (
    DEFAULT_CAP,
    DynamicsTrace,
    EquilibriumReport,
    better_response_dynamics,
    enumerate_nash,
    greedy_schedule,
    is_pure_nash,
)
from attraction.errors import AttractionError, InstanceTooLargeError
from attraction.extensive import descending_order, spe, spe_outcome_is_nash, spe_strategy
from attraction.game import Game, check_profile, occupancy
from attraction.multifilm import (
    StudioGame,
    check_assignment,
    exact_best_response,
    find_pure_nash,
    partition_gadget,
    studio_utility,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TOO_LARGE = 3


class UsageError(ValueError):
    pass


@dataclass
class Output:
    """What a command produced: a JSON payload and, for tables, CSV rows."""

    result: Any
    table: list[list[Any]] | None = None
    raw_csv: str | None = None
    inputs: list[bytes] = field(default_factory=list)


# ---------------------------------------------------------------- encoding


def encode(value: Any) -> Any:
    """Turn results into JSON-ready values; rationals become ``"p/q"``."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, dict):
        return {str(encode(k)) if not isinstance(k, str) else k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (frozenset, set)) else value
        return [encode(v) for v in items]
    return value


def _cell(value: Any) -> str:
    v = encode(value)
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(rows: list[list[Any]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return out.getvalue()


# ----------------------------------------------------------------- reading


def _read_bytes(path: str, out: Output) -> bytes:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    out.inputs.append(data)
    return data


def _parse_json(text: str, exact: bool, what: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction if exact else float)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {what}: {exc}") from exc


def load_json(path: str, exact: bool, out: Output) -> Any:
    try:
        text = _read_bytes(path, out).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UsageError(f"{path} is not UTF-8") from exc
    return _parse_json(text, exact, path)


def load_game(path: str, exact: bool, out: Output) -> Game:
    data = load_json(path, exact, out)
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object with demands and popularity")
    return Game.from_dict(data, exact=exact)


def parse_ints(text: str, what: str) -> tuple[int, ...]:
    """``1,2,1`` or ``[1,2,1]``."""
    body = text.strip()
    if body.startswith("["):
        body = body[1:-1] if body.endswith("]") else body
    try:
        return tuple(int(tok) for tok in body.split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"{what} must be a comma-separated list of integers, got {text!r}") from exc


def load_profile(text: str, out: Output) -> tuple[int, ...]:
    if os.path.isfile(text):
        data = load_json(text, False, out)
        if not isinstance(data, list):
            raise UsageError(f"{text}: expected a JSON list")
        return parse_ints(",".join(str(x) for x in data), "profile")
    out.inputs.append(text.encode())
    return parse_ints(text, "profile")


def load_assignment(text: str, out: Output) -> list[list[int]]:
    if os.path.isfile(text):
        data = load_json(text, False, out)
    else:
        out.inputs.append(text.encode())
        data = _parse_json(text, False, "--fixed")
    if not isinstance(data, list) or not all(isinstance(s, list) for s in data):
        raise UsageError("joint assignment must be a list of per-studio slot lists")
    return data


def parse_holidays(text: str | None) -> list[Holiday]:
    """``START:END`` pairs, comma separated, or a CSV file with start,end columns."""
    if not text:
        return []
    try:
        if os.path.isfile(text):
            with open(text, newline="", encoding="utf-8") as fh:
                return [
                    Holiday(date.fromisoformat(r["start"].strip()), date.fromisoformat(r["end"].strip()))
                    for r in csv.DictReader(fh)
                ]
        spans = []
        for item in text.split(","):
            start, _, end = item.strip().partition(":")
            spans.append(Holiday(date.fromisoformat(start), date.fromisoformat(end or start)))
        return spans
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad holiday calendar {text!r}: {exc}") from exc


def load_records(path: str, out: Output, skip_invalid: bool):
    _read_bytes(path, out)
    return read_records(path, on_invalid="skip" if skip_invalid else "raise")


# ----------------------------------------------------------------- payloads


def report_payload(report: EquilibriumReport, m: int) -> dict:
    dev = report.deviation
    return {
        "profile": report.profile,
        "utilities": report.utilities,
        "occupancy": occupancy(report.profile, m),
        "is_equilibrium": report.is_equilibrium,
        "deviation": None
        if dev is None
        else {"player": dev.player, "from_slot": dev.from_slot, "to_slot": dev.to_slot, "gain": dev.gain},
    }


def trace_payload(trace: DynamicsTrace) -> dict:
    return {
        "converged": trace.converged,
        "terminal": trace.terminal,
        "steps": [
            {
                "player": s.player,
                "from_slot": s.from_slot,
                "to_slot": s.to_slot,
                "utility_before": s.utility_before,
                "utility_after": s.utility_after,
            }
            for s in trace.steps
        ],
    }


def panel_args(records, args):
    return partition_slots(records, parse_holidays(args.holidays), args.mode, args.threshold)


# ----------------------------------------------------------------- commands


def cmd_solve(args) -> Output:
    out = Output(None)
    game = load_game(args.game, args.exact, out)
    if args.method == "greedy":
        _, report = greedy_schedule(game)
        out.result = report_payload(report, game.m)
        return out
    found = enumerate_nash(game, cap=args.cap, workers=args.threads)
    out.result = {"count": len(found), "equilibria": [report_payload(r, game.m) for r in found]}
    out.table = [["profile", "utilities"]] + [
        [" ".join(map(str, r.profile)), " ".join(_cell(u) for u in r.utilities)] for r in found
    ]
    return out


def cmd_verify(args) -> Output:
    out = Output(None)
    game = load_game(args.game, args.exact, out)
    out.result = report_payload(is_pure_nash(game, load_profile(args.profile, out)), game.m)
    return out


def cmd_dynamics(args) -> Output:
    out = Output(None)
    game = load_game(args.game, args.exact, out)
    start = load_profile(args.start, out)
    trace = better_response_dynamics(game, start, args.max_steps, args.order, args.seed)
    payload = trace_payload(trace)
    payload["report"] = report_payload(is_pure_nash(game, trace.terminal), game.m)
    out.result = payload
    return out


def cmd_spe(args) -> Output:
    out = Output(None)
    game = load_game(args.game, args.exact, out)
    if args.order == "auto-desc":
        order = descending_order(game)
    elif args.order is None:
        order = tuple(range(1, game.n + 1))
    else:
        order = parse_ints(args.order, "--order")
    result = spe(game, order, cap=args.cap)
    payload = {
        "order": order,
        "outcome": result.outcome,
        "utilities": result.utilities,
        "occupancy": occupancy(result.outcome, game.m),
        "path": [{"player": p, "slot": s} for p, s in result.path],
    }
    if args.check_nash:
        payload["nash"] = report_payload(spe_outcome_is_nash(game, order, args.cap), game.m)
    if args.full_strategy:
        payload["strategy"] = [
            {"history": h, "slot": s} for h, s in spe_strategy(game, order, args.cap).items()
        ]
    out.result = payload
    return out


def _studio_game(args, out: Output) -> StudioGame:
    data = load_json(args.game, args.exact, out)
    if not isinstance(data, dict):
        raise UsageError(f"{args.game}: expected a JSON object with demands and studios")
    return StudioGame.from_dict(data, exact=args.exact)


def cmd_multifilm(args) -> Output:
    out = Output(None)
    if args.action == "gadget":
        weights = parse_ints(args.weights, "--weights")
        out.inputs.append(args.weights.encode())
        g = partition_gadget(weights, cap=args.cap)
        out.result = {
            "weights": weights,
            "game": {"demands": g.game.demands, "studios": g.game.studios},
            "fixed": g.fixed,
            "threshold": g.threshold,
            "optimum": g.optimum,
            "placement": g.placement,
            "verdict": g.verdict,
            "partition_exists": g.partition_exists,
        }
        return out
    sg = _studio_game(args, out)
    if args.action == "best-response":
        fixed = check_assignment(sg, load_assignment(args.fixed, out))
        slots, value = exact_best_response(sg, fixed, args.studio, cap=args.cap)
        out.result = {
            "studio": args.studio,
            "fixed": fixed,
            "current_utility": studio_utility(sg, fixed, args.studio),
            "best_response": slots,
            "utility": value,
        }
        return out
    search = find_pure_nash(sg, cap=args.cap)
    out.result = {
        "exists": search.exists,
        "equilibrium": search.equilibrium,
        "utilities": search.utilities,
        "profiles_checked": search.profiles_checked,
        "certificate": [
            {"profile": d.profile, "studio": d.studio, "better": d.better, "gain": d.gain}
            for d in search.certificate
        ],
    }
    return out


def cmd_carryover(args) -> Output:
    out = Output(None)
    game = load_game(args.game, args.exact, out)
    if args.action == "potential":
        profile = check_profile(load_profile(args.profile, out), game.n, game.m)
        out.result = {
            "profile": profile,
            "utilities": carryover_utilities(game, profile),
            "potential": homogeneous_potential(game, profile),
        }
        return out
    trace = carryover_dynamics(game, load_profile(args.start, out), args.max_steps, args.order, args.seed)
    payload = trace_payload(trace)
    payload["report"] = report_payload(is_carryover_nash(game, trace.terminal), game.m)
    payload["report"]["utilities"] = carryover_utilities(game, trace.terminal)
    out.result = payload
    return out


def cmd_analyze(args) -> Output:
    out = Output(None)
    if args.action == "synth":
        return _synth(args, out)
    records = load_records(args.records, out, args.skip_invalid)
    action = args.action
    if action == "partition":
        panel = panel_args(records, args)
        out.result = {
            "slots": [
                {
                    "index": s.index,
                    "start": s.start,
                    "end": s.end,
                    "days": s.days,
                    "demand": s.demand,
                    "new": s.new,
                    "old": {m: {"box_office": b, "age": a} for m, (b, a) in s.old.items()},
                }
                for s in panel.slots
            ],
            "carried_in": panel.carried_in,
            "total_box_office": panel.total_box_office,
        }
        out.table = [["slot", "start", "end", "demand", "new_movies", "old_movies"]] + [
            [s.index, s.start, s.end, s.demand, len(s.new), len(s.old)] for s in panel.slots
        ]
    elif action == "decay":
        curves = decay_stats(records)
        out.result = {
            "films": curves.films,
            "grid": curves.grid,
            "first_week_share": curves.first_week,
            "second_over_first": curves.second_over_first,
        }
        out.raw_csv = curves.to_csv()
    elif action == "theater":
        rep = theater_rationality(records, args.tau, args.printed_sign)
        out.result = {
            "tau": args.tau,
            "rational_days": rep.rational_days,
            "defined_days": rep.defined_days,
            "rational_ratio": rep.rational_ratio,
            "scores": rep.scores,
        }
        out.table = [["date", "score"]] + [[d, s] for d, s in rep.scores.items()]
    elif action == "infer":
        ig = infer_popularity(panel_args(records, args), args.gamma)
        out.result = {"gamma": ig.gamma, "demands": ig.demands, "theta": ig.theta, "skipped": ig.skipped}
        out.table = [["movie_id", "theta"]] + [[m, t] for m, t in ig.theta.items()]
    elif action == "brr":
        panel = panel_args(records, args)
        ig = infer_popularity(panel, args.gamma)
        rep = best_response_rate(ig, panel, args.max_shift, args.tol)
        out.result = {
            "gamma": args.gamma,
            "tolerance_factor": rep.tolerance_factor,
            "rates": rep.rates,
            "verdicts": [{"movie_id": m, "shift": x, "best": ok} for (m, x), ok in sorted(rep.verdicts.items())],
        }
        out.table = [["shift", "rate"]] + [[x, r] for x, r in rep.rates.items()]
    elif action == "leadtime":
        _read_bytes(args.decisions, out)
        rows = lead_time_table(records, read_decisions(args.decisions), args.unit)
        out.result = {"buckets": [{"bucket": r.bucket, "films": r.films, "mean_days": r.mean_days} for r in rows]}
        out.table = [["bucket", "films", "mean_days"]] + [[r.bucket, r.films, r.mean_days] for r in rows]
    return out


def _synth(args, out: Output) -> Output:
    data = load_json(args.spec, False, out)
    if not isinstance(data, dict):
        raise UsageError(f"{args.spec}: expected a JSON object")
    plan = None
    if data.get("release_slots") in (None, "equilibrium"):
        try:
            plan = equilibrium_release_slots(
                data["demands"],
                data["theta"],
                data.get("gamma", 0.8),
                data.get("lifetime", 1),
                data.get("holdovers", ()),
            )
        except (KeyError, TypeError) as exc:
            raise UsageError(f"synthetic spec needs demands and theta: {exc}") from exc
        data = {**data, "release_slots": plan.slots}
    try:
        spec = SyntheticSpec.from_dict(data)
    except TypeError as exc:
        raise UsageError(f"bad synthetic spec: {exc}") from exc
    records = generate_synthetic_panel(spec, seed=args.seed)
    text = write_records(records)
    out.raw_csv = text
    out.result = {
        "seed": args.seed,
        "release_slots": spec.release_slots,
        "plan": None
        if plan is None
        else {
            "greedy_was_equilibrium": plan.greedy_was_equilibrium,
            "repair_steps": plan.repair_steps,
            "converged": plan.converged,
        },
        "records": len(records),
        "csv": text,
    }
    return out


# ------------------------------------------------------------------ parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--exact", action="store_true", help="rational arithmetic")
    p.add_argument("--threads", type=int, default=1, help="worker processes where supported")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--timing", action="store_true", help="add wall time to the report")
    return p


def _panel_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--holidays", help="START:END[,START:END...] or a start,end CSV")
    p.add_argument("--mode", choices=("friday", "screenings"), default="friday")
    p.add_argument("--threshold", type=float, default=0.10)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="attraction", description="Release-timing game solver.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def leaf(container, name, handler, help_text):
        p = container.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    solve = sub.add_parser("solve", help="find an equilibrium")
    solve_sub = solve.add_subparsers(dest="method", required=True, metavar="METHOD")
    leaf(solve_sub, "greedy", cmd_solve, "greedy schedule").add_argument("game")
    p = leaf(solve_sub, "enumerate", cmd_solve, "all pure equilibria")
    p.add_argument("game")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = leaf(sub, "verify", cmd_verify, "check a profile for profitable deviations")
    p.add_argument("game")
    p.add_argument("profile")

    p = leaf(sub, "dynamics", cmd_dynamics, "better-response dynamics")
    p.add_argument("game")
    p.add_argument("--start", required=True)
    p.add_argument("--order", choices=("lowest", "random"), default="lowest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=10_000)

    p = leaf(sub, "spe", cmd_spe, "subgame-perfect equilibrium")
    p.add_argument("game")
    p.add_argument("--order", help="comma-separated move order, or auto-desc")
    p.add_argument("--check-nash", action="store_true")
    p.add_argument("--full-strategy", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    multi = sub.add_parser("multifilm", help="studios with several films")
    multi_sub = multi.add_subparsers(dest="action", required=True, metavar="ACTION")
    p = leaf(multi_sub, "best-response", cmd_multifilm, "exact studio best response")
    p.add_argument("game")
    p.add_argument("--studio", type=int, required=True)
    p.add_argument("--fixed", required=True, help="joint assignment JSON file or literal")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p = leaf(multi_sub, "find-ne", cmd_multifilm, "joint equilibrium or nonexistence certificate")
    p.add_argument("game")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p = leaf(multi_sub, "gadget", cmd_multifilm, "equal-partition gadget")
    p.add_argument("--weights", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    carry = sub.add_parser("carryover", help="films earning in two consecutive slots")
    carry_sub = carry.add_subparsers(dest="action", required=True, metavar="ACTION")
    p = leaf(carry_sub, "solve", cmd_carryover, "better-response dynamics")
    p.add_argument("game")
    p.add_argument("--start", required=True)
    p.add_argument("--order", choices=("lowest", "random"), default="lowest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=10_000)
    p = leaf(carry_sub, "potential", cmd_carryover, "potential of a homogeneous profile")
    p.add_argument("game")
    p.add_argument("profile")

    analyze = sub.add_parser("analyze", help="box-office panel analytics")
    an_sub = analyze.add_subparsers(dest="action", required=True, metavar="ACTION")
    for name, help_text in (
        ("partition", "split the panel into slots"),
        ("decay", "week-one and week-two survival curves"),
        ("theater", "screening adjustment scores"),
        ("infer", "popularity inference"),
        ("brr", "best-response rates"),
        ("leadtime", "decision lead time by box-office bucket"),
    ):
        p = leaf(an_sub, name, cmd_analyze, help_text)
        p.add_argument("records")
        p.add_argument("--skip-invalid", action="store_true", help="drop bad rows instead of failing")
        if name in ("partition", "infer", "brr"):
            _panel_opts(p)
        if name in ("infer", "brr"):
            p.add_argument("--gamma", type=float, default=0.8)
        if name == "brr":
            p.add_argument("--max-shift", type=int, default=4)
            p.add_argument("--tol", type=float, default=1.1)
        if name == "theater":
            p.add_argument("--tau", type=float, default=0.05)
            p.add_argument("--printed-sign", action="store_true", help="flip the score's sign")
        if name == "leadtime":
            p.add_argument("--decisions", required=True, help="movie_id,decision_date CSV")
            p.add_argument("--unit", type=float, default=1e6, help="currency units per million")
    p = leaf(an_sub, "synth", cmd_analyze, "generate a synthetic panel")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int, default=0)
    return parser


# ---------------------------------------------------------------- dispatch


def _command_name(args) -> str:
    parts = [args.command]
    for attr in ("method", "action"):
        if getattr(args, attr, None):
            parts.append(getattr(args, attr))
    return " ".join(parts)


def dispatch(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    handler: Callable[[Any], Output] = args.handler
    started = time.perf_counter()
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        out = handler(args)
    except InstanceTooLargeError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_TOO_LARGE
    except (UsageError, AttractionError, ValueError) as exc:
        if isinstance(exc, AssertionError):
            raise
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    elapsed = time.perf_counter() - started

    if args.format == "csv":
        if out.raw_csv is not None:
            stdout.write(out.raw_csv)
        elif out.table is not None:
            stdout.write(render_csv(out.table))
        else:
            print(f"error: {_command_name(args)} has no tabular output", file=stderr)
            return EXIT_INVALID
        return EXIT_OK

    digest = hashlib.sha256()
    for blob in out.inputs:
        digest.update(hashlib.sha256(blob).digest())
    report = {
        "command": list(argv),
        "input_digest": digest.hexdigest(),
        "result": encode(out.result),
        "version": __version__,
    }
    if args.timing:
        report["wall_time_s"] = elapsed
    stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
