"""Command-line interface.

Subcommands map onto the library layers: ``reproduce`` runs the scripted
headline scenarios, ``bounds``/``identify`` solve partial-identification
programs for a model and target, ``simulate`` logs classical oracle
queries, ``tomography`` sweeps the coherent-probe state, and
``toy-check`` emits the bit-pair equivalence report.

Exit codes: 0 all claims pass, 1 a claim failed, 2 usage/parse/validation
problems.  Identical command lines (and seeds) produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib.resources import files
from pathlib import Path

from .classical import simulate_log
from .core import ConfoundedModel, CounterfactualQuery, FunctionDistribution
from .errors import CfOracleError
from .identify import ConstraintLevel, LinearTarget, build_constraints, is_identifiable
from .modelio import distribution_to_json_dict, load_model
from .quantum import Amplitudes, build_rho_xy, tomography_sweep
from .reproduce import SCENARIOS, run_scenario
from .toy import verify_binary_equivalence


def _resolve_model_path(token: str) -> Path:
    path = Path(token)
    if path.exists():
        return path
    bundled = files("cforacle").joinpath("data", token)
    if bundled.is_file():
        return Path(str(bundled))
    bundled = files("cforacle").joinpath("data", token + ".json")
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(
        f"model file {token!r} not found (also tried the bundled data directory)"
    )


def _load_distribution(token: str) -> FunctionDistribution:
    model = load_model(_resolve_model_path(token))
    if isinstance(model, ConfoundedModel):
        # oracle access intervenes on the input, which severs the
        # confounder; only the response marginal is queryable
        return model.response_marginal()
    return model


def _witness_dict(witness: FunctionDistribution) -> dict:
    return distribution_to_json_dict(witness)


def _emit_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def cmd_reproduce(args) -> int:
    report = run_scenario(args.example)
    _emit_json(report.to_json_dict())
    return 0 if report.passed else 1


def _identification(args):
    model = _load_distribution(args.model)
    level = ConstraintLevel.parse(args.level)
    query = CounterfactualQuery.from_string(args.target)
    system = build_constraints(model, level)
    target = LinearTarget.from_query(query, model.n_x, model.n_y)
    return is_identifiable(target, system)


def cmd_bounds(args) -> int:
    result = _identification(args)
    _emit_json(
        {
            "lo": str(result.bounds.lo),
            "hi": str(result.bounds.hi),
            "identifiable": result.identifiable,
            "witness_lo": _witness_dict(result.witness_lo),
            "witness_hi": _witness_dict(result.witness_hi),
        }
    )
    return 0


def cmd_identify(args) -> int:
    result = _identification(args)
    _emit_json(
        {
            "identifiable": result.identifiable,
            "lo": str(result.bounds.lo),
            "hi": str(result.bounds.hi),
            "width": str(result.bounds.width),
            "witness_lo": _witness_dict(result.witness_lo),
            "witness_hi": _witness_dict(result.witness_hi),
        }
    )
    return 0


def cmd_simulate(args) -> int:
    model = _load_distribution(args.model)
    if args.queries < 1:
        raise CfOracleError("--queries must be at least 1")
    inputs = [i % model.n_x for i in range(args.queries)]
    log = simulate_log(model, inputs, args.seed)
    sys.stdout.write(log.to_csv())
    return 0


def cmd_tomography(args) -> int:
    model = _load_distribution(args.model)
    alpha = Amplitudes.uniform(model.n_x)
    rho = build_rho_xy(model, alpha)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "x_prime", "y", "y_prime", "value"])
    for x, x_prime, y, y_prime, value in tomography_sweep(rho, alpha):
        writer.writerow([x, x_prime, y, y_prime, f"{value:.12g}"])
    sys.stdout.write(buffer.getvalue())
    return 0


def cmd_toy_check(args) -> int:
    report = verify_binary_equivalence()
    _emit_json(report.to_json_list())
    return 0 if report.all_equal else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cforacle",
        description="Counterfactual identification via classical and coherent oracle queries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rep = sub.add_parser(
        "reproduce", help="run a scripted scenario and report its claims"
    )
    p_rep.add_argument("example", choices=sorted(SCENARIOS))
    p_rep.add_argument("--output", choices=["json"], default="json")
    p_rep.set_defaults(func=cmd_reproduce)

    for name, func, help_text in (
        ("bounds", cmd_bounds, "partial-identification interval for a target"),
        ("identify", cmd_identify, "decide identifiability with witnesses"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True, help="model JSON path or bundled name")
        p.add_argument(
            "--level", required=True, help="constraint level: one-way or two-way"
        )
        p.add_argument(
            "--target", required=True, help="joint counterfactual, e.g. '0:1,1:1'"
        )
        p.add_argument("--output", choices=["json"], default="json")
        p.set_defaults(func=func)

    p_sim = sub.add_parser("simulate", help="log classical oracle queries as CSV")
    p_sim.add_argument("--model", required=True)
    p_sim.add_argument("--queries", type=int, required=True, help="total query count")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--output", choices=["csv"], default="csv")
    p_sim.set_defaults(func=cmd_simulate)

    p_tomo = sub.add_parser(
        "tomography", help="extract all pairwise marginals from the probe state"
    )
    p_tomo.add_argument("--model", required=True)
    p_tomo.add_argument("--output", choices=["csv"], default="csv")
    p_tomo.set_defaults(func=cmd_tomography)

    p_toy = sub.add_parser(
        "toy-check", help="bit-pair model versus exact coherent probabilities"
    )
    p_toy.add_argument("--output", choices=["json"], default="json")
    p_toy.set_defaults(func=cmd_toy_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(
            f"parse error in model JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}",
            file=sys.stderr,
        )
        return 2
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except CfOracleError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
