"""Command-line front end.  Every subcommand writes one JSON (or CSV) report
that embeds its effective configuration."""
from __future__ import annotations

import argparse
import math
import os
import sys

from . import serialize
from .equilibrium import (
    BoundaryTieError,
    Profile,
    StrategySpace,
    best_response,
    classify_table,
    haar_convergence,
    haar_equilibrium_check,
    is_epsilon_nash,
    pure_nash_scan,
)
from .parsing import ParseError, parse_move, parse_number, parse_strategy
from .protocol import EntanglerSpec, PayoffTable, TableError, play
from .qmath import SU2Error, SeededRng, StateError
from .strategies import Pure, Role, StrategyError, counter_strategy, describe, ewl_membership, mirror

SEED_ENV = "QPDGAME_SEED"
CSV_COMMANDS = ("nash-scan", "haar")

DOMAIN_ERRORS = (
    ParseError, SU2Error, StateError, StrategyError, TableError, BoundaryTieError, ValueError,
)


def _table(args) -> PayoffTable:
    parts = [p for p in args.table.split(",")]
    if len(parts) != 4:
        raise TableError(f"table needs four values t,r,p,s; got {args.table!r}")
    try:
        vals = [parse_number(p) for p in parts]
    except ParseError as exc:
        raise TableError(f"bad table entry: {exc}") from None
    return PayoffTable(*vals, strict_iterated=args.strict_iterated)


def _space(args) -> StrategySpace:
    if args.resolution:
        res = [int(x) for x in args.resolution.split(",")]
    else:
        res = [181, 91] if args.space == "ewl" else [10, 10, 10]
    return StrategySpace(args.space, res)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else 0


def _dist(d) -> dict:
    return {"CC": d[0], "CD": d[1], "DC": d[2], "DD": d[3]}


def _br(br) -> dict:
    out = {"move": serialize.matrix_to_json(br.move), "payoff": br.payoff, "method": br.method}
    if br.coords is not None:
        out["coords"] = [float(c) for c in br.coords]
    return out


def cmd_play(args, cfg):
    a, b = parse_strategy(args.alice), parse_strategy(args.bob)
    table, e = _table(args), EntanglerSpec(cfg["gamma"])
    res = play(a, b, table, e, SeededRng(args.seed), args.samples)
    out = {
        "alice": describe(a),
        "bob": describe(b),
        "distribution": _dist(res.distribution),
        "payoffs": list(res.payoffs),
    }
    if res.mc_distribution is not None:
        out["monte_carlo"] = {
            "samples": res.samples,
            "distribution": _dist(res.mc_distribution),
            "payoffs": list(res.mc_payoffs),
        }
    return out


def cmd_counter(args, cfg):
    opp = parse_move(args.against)
    role = Role(args.player)
    move = counter_strategy(opp, role)
    pa, pb = (move, opp) if role is Role.A else (opp, move)
    res = play(Pure(pa), Pure(pb), _table(args))
    return {
        "against": serialize.matrix_to_json(opp),
        "player": role.value,
        "counter": serialize.matrix_to_json(move),
        "distribution": _dist(res.distribution),
        "payoffs": list(res.payoffs),
    }


def cmd_mirror(args, cfg):
    x = parse_move(args.move)
    return {"move": serialize.matrix_to_json(x), "mirror": serialize.matrix_to_json(mirror(x))}


def cmd_membership(args, cfg):
    u = parse_move(args.move)
    p = ewl_membership(u)
    return {
        "move": serialize.matrix_to_json(u),
        "member": p is not None,
        "params": None if p is None else {"theta": p.theta, "phi": p.phi},
    }


def cmd_best_response(args, cfg):
    opp = parse_strategy(args.against)
    br = best_response(opp, Role(args.player), _space(args), _table(args),
                       EntanglerSpec(cfg["gamma"]), refine=not args.no_refine)
    return {"against": describe(opp), "player": args.player, "best_response": _br(br)}


def cmd_nash_scan(args, cfg):
    space = _space(args)
    hits = pure_nash_scan(space, args.epsilon, _table(args), EntanglerSpec(cfg["gamma"]))
    if args.format == "csv":
        header = ["i", "j", "payoff_a", "payoff_b", "gain_a", "gain_b"]
        return header, [(h.i, h.j, h.payoff_a, h.payoff_b, h.gain_a, h.gain_b) for h in hits]
    return {
        "space": space.describe(),
        "count": len(hits),
        "equilibria": [
            {
                "i": h.i, "j": h.j,
                "a": serialize.matrix_to_json(h.a), "b": serialize.matrix_to_json(h.b),
                "payoffs": [h.payoff_a, h.payoff_b], "gains": [h.gain_a, h.gain_b],
            }
            for h in hits
        ],
    }


def _series(args):
    if args.series:
        return [int(parse_number(x)) for x in args.series.split(",")]
    sizes, n = [], 1000
    while n < args.samples:
        sizes.append(n)
        n *= 10
    return sizes + [args.samples]


def cmd_haar(args, cfg):
    b = parse_strategy(args.bob)
    table, e = _table(args), EntanglerSpec(cfg["gamma"])
    rng = SeededRng(args.seed)
    if args.format == "csv":
        rows = haar_convergence(b, _series(args), rng, e)
        header = ["samples", "p_cc", "p_cd", "p_dc", "p_dd", "max_deviation"]
        return header, [(n, *map(float, d), dev) for n, d, dev in rows]
    rep = haar_equilibrium_check(b, args.samples, rng, table, e)
    return {
        "bob": describe(b),
        "analytic": _dist(rep.analytic),
        "monte_carlo": None if rep.monte_carlo is None else _dist(rep.monte_carlo),
        "max_mc_deviation": rep.max_mc_deviation,
        "expected_payoff": list(rep.expected_payoff),
        "max_deviation_gain": rep.max_deviation_gain,
    }


def cmd_classify(args, cfg):
    table = _table(args)
    return {
        "classification": classify_table(table).value,
        "quantum_payoff": table.quantum_equilibrium_payoff,
        "classical_equilibrium_payoff": table.p,
        "cooperative_payoff": table.r,
    }


def cmd_nash_check(args, cfg):
    a, b = parse_strategy(args.alice), parse_strategy(args.bob)
    v = is_epsilon_nash(Profile(a, b), _space(args), args.epsilon, _table(args),
                        EntanglerSpec(cfg["gamma"]))
    return {
        "is_epsilon_nash": v.is_epsilon_nash,
        "gains": [v.best_gain_a, v.best_gain_b],
        "payoffs": list(v.payoffs),
        "witness_a": _br(v.witness_a),
        "witness_b": _br(v.witness_b),
    }


COMMANDS = {
    "play": cmd_play,
    "counter": cmd_counter,
    "mirror": cmd_mirror,
    "membership": cmd_membership,
    "nash-scan": cmd_nash_scan,
    "nash-check": cmd_nash_check,
    "best-response": cmd_best_response,
    "haar": cmd_haar,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", default="5,3,1,0", help="payoffs t,r,p,s")
    common.add_argument("--strict-iterated", action="store_true",
                        help="also require 2r > t + s")
    common.add_argument("--gamma", default="pi/2", help="entanglement angle in radians")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    common.add_argument("--seed", type=int, default=None)

    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("--space", choices=("ewl", "full"), default="full")
    space.add_argument("--resolution", default=None,
                       help="grid counts per angle, e.g. 181,91 or 10,10,10")

    parser = argparse.ArgumentParser(prog="qpdgame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", parents=[common], help="play one profile")
    p.add_argument("--alice", required=True)
    p.add_argument("--bob", required=True)
    p.add_argument("--samples", type=int, default=0)

    p = sub.add_parser("counter", parents=[common], help="ideal counter-move")
    p.add_argument("--against", required=True)
    p.add_argument("--player", choices=("A", "B"), default="B", help="who counters")

    p = sub.add_parser("mirror", parents=[common], help="B-equivalent of an A move")
    p.add_argument("--move", required=True)

    p = sub.add_parser("membership", parents=[common], help="test the two-angle family")
    p.add_argument("--move", required=True)

    p = sub.add_parser("nash-scan", parents=[common, space], help="grid equilibrium scan")
    p.add_argument("--epsilon", type=float, default=0.01)

    p = sub.add_parser("nash-check", parents=[common, space], help="epsilon-Nash verdict")
    p.add_argument("--alice", required=True)
    p.add_argument("--bob", required=True)
    p.add_argument("--epsilon", type=float, default=1e-6)

    p = sub.add_parser("best-response", parents=[common, space], help="best reply")
    p.add_argument("--against", required=True)
    p.add_argument("--player", choices=("A", "B"), default="B", help="who responds")
    p.add_argument("--no-refine", action="store_true")

    p = sub.add_parser("haar", parents=[common], help="Haar mixed-equilibrium check")
    p.add_argument("--bob", default="C")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--series", default=None, help="CSV sample sizes, e.g. 1e3,1e4")

    p = sub.add_parser("classify", parents=[common], help="classify a payoff table")
    return parser


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("output",)}
    cfg["gamma"] = parse_number(args.gamma)
    t = _table(args)
    cfg["table"] = [t.t, t.r, t.p, t.s]
    if args.command in ("nash-scan", "nash-check", "best-response"):
        cfg["resolution"] = list(_space(args).resolution)
    return cfg


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        args.seed = _default_seed()
    if args.format == "csv" and args.command not in CSV_COMMANDS:
        print(f"qpdgame: --format csv is only supported by {', '.join(CSV_COMMANDS)}",
              file=stderr)
        return 2
    try:
        cfg = _config(args)
        if not math.isfinite(cfg["gamma"]):
            raise ValueError("gamma must be finite")
        result = COMMANDS[args.command](args, cfg)
    except DOMAIN_ERRORS as exc:
        print(f"qpdgame {args.command}: error: {exc}", file=stderr)
        return 1
    if args.format == "csv":
        text = serialize.csv_dumps(*result)
    else:
        text = serialize.dumps({"command": args.command, "config": cfg, "result": result})
    if args.output == "-":
        stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
