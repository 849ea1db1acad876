"""Command-line front end.

    recombination <command> CONFIG [--mode exact|float] [--out DIR] ...

Commands: closure, matrix, evolve, qsd, qprocess, simulate, verify.  The
main JSON result goes to stdout; ``--out`` also writes JSON/CSV files.
Exit status: 0 success (degenerate models included, flagged in the
output); 2 invalid input; 3 an exact identity failed; 4 a size cap was hit.
Errors are printed to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path
from typing import Optional

from . import arith, report
from .chain import build_chain, distribution_series, survival_series
from .config import ConfigError, load_config
from .measures import mixture_of_factorizations, xi_apply
from .montecarlo import estimate_survival
from .partitions import ResourceLimitError
from .quasistationary import ConsistencyError, analyze, q_path_probability, path_probability
from .verify import iterate_checks, verify_model

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IDENTITY = 3
EXIT_CAP = 4


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="model configuration (JSON)")
    common.add_argument("--mode", choices=arith.MODES, help="override the config's number mode")
    common.add_argument("--out", type=Path, help="directory for JSON/CSV output files")
    common.add_argument("--state-cap", type=int, help="maximum number of chain states")
    common.add_argument("--table-cap", type=int, help="maximum number of joint table entries")

    p = argparse.ArgumentParser(prog="recombination", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("closure", parents=[common], help="reachable partitions and the absorbing state")
    sub.add_parser("matrix", parents=[common], help="transition matrix")
    ev = sub.add_parser("evolve", parents=[common], help="state law and survival series")
    ev.add_argument("--steps", type=int, default=10)
    sub.add_parser("qsd", parents=[common], help="quasi-stationary report")
    qp = sub.add_parser("qprocess", parents=[common], help="Q-process and conditioned-path checks")
    qp.add_argument("--steps", type=int, default=300, help="conditioning horizon n")
    qp.add_argument("--path-length", type=int, default=3)
    sim = sub.add_parser("simulate", parents=[common], help="Monte Carlo survival estimates")
    sim.add_argument("--seeds", type=int, default=10_000)
    sim.add_argument("--horizon", type=int, default=50)
    sim.add_argument("--seed", type=int, default=0, help="base seed (u64)")
    ve = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    ve.add_argument("--steps", type=int, default=8, help="iterations for the measure cross-check")
    return p


def _emit_error(kind: str, message: str, **extra) -> None:
    payload = {"error": kind, "message": message}
    payload.update({k: v for k, v in extra.items() if v is not None})
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _write(out: Optional[Path], name: str, text: str) -> None:
    if out is not None:
        report.write_text(out / name, text)


def cmd_closure(cfg, P, args):
    data = report.closure_json(P)
    _write(args.out, "closure.json", report.dumps(data))
    return data, EXIT_OK


def cmd_matrix(cfg, P, args):
    data = report.matrix_json(P.space.states, P.matrix)
    data["degenerate"] = P.space.absorbing == P.space.start
    data["absorbing"] = report.part(P.space[P.space.absorbing])
    _write(args.out, "matrix.json", report.dumps(data))
    _write(args.out, "matrix.csv", report.matrix_csv(P))
    return data, EXIT_OK


def cmd_evolve(cfg, P, args):
    if args.steps < 0:
        raise ConfigError("--steps must be >= 0")
    series = distribution_series(P, args.steps)
    a = P.space.absorbing
    data = {
        "steps": args.steps,
        "states": report.parts(P.space.states),
        "distribution": [[report.num(x) for x in b] for b in series],
        "survival": [report.num(arith.one(P.mode) - b[a]) for b in series],
    }
    status = EXIT_OK
    if cfg.measure is not None:
        check = iterate_checks(P, cfg.measure, args.steps)[0]
        data["crossCheck"] = {"ok": check.ok, "detail": check.detail}
        if not check.ok:
            status = EXIT_IDENTITY
    _write(args.out, "evolve.json", report.dumps(data))
    _write(args.out, "evolve.csv", report.series_csv(P.space.states, series, a))
    return data, status


def cmd_qsd(cfg, P, args):
    data = report.qsd_json(analyze(P))
    _write(args.out, "qsd.json", report.dumps(data))
    return data, EXIT_OK


def cmd_qprocess(cfg, P, args):
    r = analyze(P)
    if r.degenerate:
        data = {"degenerate": True, "notice": r.notice}
        _write(args.out, "qprocess.json", report.dumps(data))
        return data, EXIT_OK
    n = args.steps
    states = r.boundary
    start = P.space[P.space.start]
    surv = {s: survival_series(P, n, s) for s in states}
    paths = []
    worst = 0.0
    for length in range(1, args.path_length + 1):
        for path in itertools.product(states, repeat=length):
            prob = path_probability(P, path)
            if prob == 0:
                continue
            finite = prob * surv[path[-1]][n - length] / surv[start][n]
            limit = q_path_probability(states, r.Q, path, start)
            err = abs(float(finite) - float(limit))
            worst = max(worst, err)
            paths.append({
                "path": report.parts(path),
                "limit": report.num(limit),
                "conditioned": float(finite),
                "error": err,
            })
    data = {
        "degenerate": False,
        "eta": report.num(r.eta),
        "F": report.parts(r.F),
        "Q": report.matrix_json(states, r.Q),
        "horizon": n,
        "paths": paths,
        "maxError": worst,
    }
    _write(args.out, "qprocess.json", report.dumps(data))
    return data, EXIT_OK


def cmd_simulate(cfg, P, args):
    if args.seeds < 1 or args.horizon < 0:
        raise ConfigError("--seeds must be >= 1 and --horizon >= 0")
    est = estimate_survival(cfg.weights, args.seeds, args.horizon, args.seed, chain=P)
    exact = survival_series(P, args.horizon)
    rows = [(e.n, e.estimate, e.stderr, exact[e.n]) for e in est]
    data = {
        "seeds": args.seeds,
        "baseSeed": args.seed,
        "horizon": args.horizon,
        "generator": "splitmix64 counter stream, seed = base + trajectory index",
        "series": [
            {"n": n, "estimate": e, "stderr": s, "exact": report.num(x)} for n, e, s, x in rows
        ],
    }
    _write(args.out, "simulate.json", report.dumps(data))
    _write(args.out, "simulate.csv", report.csv_text(["n", "estimate", "stderr", "exact"], rows))
    return data, EXIT_OK


def cmd_verify(cfg, P, args):
    checks = verify_model(P, cfg.measure, args.steps)
    ok = all(c.ok for c in checks)
    data = {
        "ok": ok,
        "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks],
    }
    _write(args.out, "verify.json", report.dumps(data))
    return data, EXIT_OK if ok else EXIT_IDENTITY


COMMANDS = {
    "closure": cmd_closure,
    "matrix": cmd_matrix,
    "evolve": cmd_evolve,
    "qsd": cmd_qsd,
    "qprocess": cmd_qprocess,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config, mode=args.mode, state_cap=args.state_cap,
                          table_cap=args.table_cap)
        P = build_chain(cfg.weights, cap=cfg.state_cap)
        data, status = COMMANDS[args.command](cfg, P, args)
    except ConfigError as exc:
        _emit_error("config", exc.message, line=exc.line, column=exc.column)
        return EXIT_INPUT
    except OSError as exc:
        _emit_error("io", str(exc))
        return EXIT_INPUT
    except ResourceLimitError as exc:
        _emit_error("cap", str(exc), count=exc.count, cap=exc.cap)
        return EXIT_CAP
    except ConsistencyError as exc:
        _emit_error("identity", str(exc))
        return EXIT_IDENTITY
    if cfg.warnings:
        data = dict(data, warnings=cfg.warnings)
    sys.stdout.write(report.dumps(data))
    return status


if __name__ == "__main__":
    sys.exit(main())
