"""Command-line experiments: simulate, measure, lln, humphreys, feasibility.

Every run prints a header with the package version, the fully resolved
configuration and an equivalent command line; re-running that command
reproduces the body byte for byte. Output is tab-delimited text.

Exit codes: 0 success, 1 usage error, 2 degenerate input, 3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import shlex
import sys
from fractions import Fraction

from . import __version__
from .calculus import CausalModel, DegenerateModelError, humphreys_check, lln_experiment
from .dynamics import ensemble_spread, parse_map, run_trajectory
from .feasibility import (DEFAULT_ASSIGNMENT_CAP, BehaviorError, RationalizeError,
                          check_global_space, parse_behavior, rationalize, verdict_lines)
from .fiq import DEFAULT_MAX_LENGTH, FiqParseError, ResourceLimitError, parse_fiq
from .measurement import MechanismParseError, parse_mechanism

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fraction(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r}") from None


def _int_list(text):
    return [int(t) for t in str(text).split(",") if t.strip()]


# option name -> (type, default, help); a default of REQUIRED must come from a flag or config
REQUIRED = object()
COMMON = {
    "seed": (int, None, "master seed (required for stochastic subcommands)"),
    "trials": (int, None, "number of trials"),
    "out": (str, None, "output path (default stdout)"),
}
OPTIONS = {
    "simulate": {
        "x0": (str, REQUIRED, "initial FIQ, e.g. 0.10(1/2)"),
        "map": (str, "doubling", "doubling | shift:<k>"),
        "steps": (int, 0, "number of map steps"),
        "mech": (str, "none", "none | measure:m=<int> | spont:lambda=<a/b>,w=<int>"),
        "max_length": (int, DEFAULT_MAX_LENGTH, "max explicit digits"),
    },
    "measure": {
        "x0": (str, REQUIRED, "FIQ to measure"),
        "precision": (int, 1, "number of leading digits actualized"),
        "max_length": (int, DEFAULT_MAX_LENGTH, "max explicit digits"),
    },
    "lln": {
        "p": (str, REQUIRED, "propensity a/b"),
        "n": (str, "100,1000,10000", "comma-separated trials per run"),
        "runs": (int, 1000, "runs per grid point"),
        "eps": (str, "1/20", "deviation threshold a/b in (0, 1)"),
    },
    "humphreys": {
        "model": (str, None, "model file with p_C, p_E_given_C, p_E_given_notC lines"),
        "p_C": (str, None, "cause propensity a/b"),
        "p_E_given_C": (str, None, "effect propensity given the cause"),
        "p_E_given_notC": (str, None, "effect propensity without the cause"),
    },
    "feasibility": {
        "behavior": (str, REQUIRED, "behavior file"),
        "tolerance": (float, 1e-9, "rationalization tolerance"),
        "max_denominator": (int, 10**6, "rationalization denominator cap"),
        "cap": (int, DEFAULT_ASSIGNMENT_CAP, "deterministic assignment cap"),
    },
}
STOCHASTIC = {"simulate", "measure", "lln"}
TRIAL_DEFAULTS = {"measure": 1000}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="fiqprop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fiqprop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file of option values; flags override it")
        for key, (_, _, helptext) in {**COMMON, **opts}.items():
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=helptext)
    return parser


def resolve(args) -> dict:
    """Merge defaults, config file and flags (in increasing priority) and coerce types."""
    cmd = args.command
    table = {**COMMON, **OPTIONS[cmd]}
    from_file = {}
    if args.config:
        try:
            with open(args.config) as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config: {exc}") from None
        unknown = set(from_file) - set(table)
        if unknown:
            raise UsageError(f"config: unknown option {sorted(unknown)[0]!r}")
    config = {}
    for key, (typ, default, _) in table.items():
        value = getattr(args, key)
        if value is None:
            value = from_file.get(key, default)
        if key == "trials" and value is None:
            value = TRIAL_DEFAULTS.get(cmd)
        if value is REQUIRED:
            raise UsageError(f"{key}: required")
        if value is not None:
            try:
                value = typ(value)
            except ValueError:
                raise UsageError(f"{key}: expected {typ.__name__}, got {value!r}") from None
        config[key] = value
    if cmd in STOCHASTIC and config["seed"] is None:
        raise UsageError("seed: required (seeds are never derived from the clock)")
    return config


def rerun_command(cmd, config) -> str:
    argv = ["fiqprop", cmd]
    for key, value in config.items():
        if value is not None and key != "out":
            argv += ["--" + key.replace("_", "-"), str(value)]
    return shlex.join(argv)


def header(cmd, config) -> list[str]:
    return [f"# fiqprop {__version__} {cmd} config={json.dumps(config, sort_keys=True)}",
            f"# rerun: {rerun_command(cmd, config)}"]


def cmd_simulate(cfg):
    try:
        x0 = parse_fiq(cfg["x0"])
    except FiqParseError as exc:
        raise UsageError(f"x0: {exc}") from None
    try:
        map_kind = parse_map(cfg["map"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        mech = parse_mechanism(cfg["mech"])
    except MechanismParseError as exc:
        raise UsageError(f"mech: {exc}") from None
    if cfg["steps"] < 0:
        raise UsageError("steps: must be >= 0")
    traj = run_trajectory(x0, map_kind, cfg["steps"], mech, cfg["seed"], cfg["max_length"])
    return ["step\tstate\tdiscarded\tevents"] + traj.lines(), EXIT_OK


def cmd_measure(cfg):
    try:
        x0 = parse_fiq(cfg["x0"])
    except FiqParseError as exc:
        raise UsageError(f"x0: {exc}") from None
    if cfg["precision"] < 1:
        raise UsageError("precision: must be >= 1")
    if cfg["trials"] < 1:
        raise UsageError("trials: must be >= 1")
    hist = ensemble_spread(x0, steps=0, trials=cfg["trials"], rng_seed=cfg["seed"],
                           precision=cfg["precision"], max_length=cfg["max_length"])
    n = cfg["trials"]
    lines = ["outcome\tcount\ttrials\tfrequency"]
    for outcome in sorted(hist):
        lines.append(f"{outcome}\t{hist[outcome]}\t{n}\t{hist[outcome] / n!r}")
    return lines, EXIT_OK


def cmd_lln(cfg):
    try:
        p = _fraction(cfg["p"])
        eps = _fraction(cfg["eps"])
        grid = _int_list(cfg["n"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not 0 <= p <= 1:
        raise UsageError("p: must lie in [0, 1]")
    if not 0 < eps < 1:
        raise UsageError("eps: must lie in (0, 1)")
    if not grid or min(grid) < 1:
        raise UsageError("n: need positive trial counts")
    if cfg["runs"] < 1:
        raise UsageError("runs: must be >= 1")
    lines = ["n\truns\teps\tdeviation_fraction\thoeffding_bound"]
    for n in grid:
        r = lln_experiment(p, n, cfg["runs"], eps, cfg["seed"])
        lines.append(f"{n}\t{r.runs}\t{eps.numerator}/{eps.denominator}\t"
                     f"{r.deviation_fraction!r}\t{r.hoeffding_bound!r}")
    return lines, EXIT_OK


def _read_model_file(path):
    values = {}
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if line:
                    key, eq, value = line.partition("=")
                    if not eq:
                        raise UsageError(f"model: expected key = value, got {line!r}")
                    values[key.strip()] = value.strip()
    except OSError as exc:
        raise UsageError(f"model: {exc}") from None
    return values


def cmd_humphreys(cfg):
    fields = ("p_C", "p_E_given_C", "p_E_given_notC")
    values = _read_model_file(cfg["model"]) if cfg["model"] else {}
    for key in set(values) - set(fields):
        raise UsageError(f"model: unknown field {key!r}")
    for key in fields:
        if cfg[key] is not None:
            values[key] = cfg[key]
    parsed = {}
    for key in fields:
        if key not in values:
            raise UsageError(f"{key}: required")
        try:
            parsed[key] = _fraction(values[key])
            CausalModel(parsed[key], 0, 0)  # range check
        except ValueError as exc:
            raise UsageError(f"{key}: {exc}") from None
    model = CausalModel(**parsed)
    lines = [f"{k}\t{_q(getattr(model, k))}" for k in fields]
    try:
        v = humphreys_check(model)
    except DegenerateModelError as exc:
        return lines + ["status\tdegenerate", f"reason\t{exc}"], EXIT_DEGENERATE
    lines += [f"p_E\t{_q(v.p_E)}",
              f"P(C|E)\t{_q(v.bayes_reversal)}",
              f"forced_P(E|C)\t{_q(v.forced_p_E_given_C)}",
              f"causally_nontrivial\t{str(v.causally_nontrivial).lower()}",
              f"contradiction\t{str(v.contradiction).lower()}",
              "status\t" + ("contradiction" if v.contradiction else "consistent")]
    return lines, EXIT_OK


def cmd_feasibility(cfg):
    try:
        with open(cfg["behavior"]) as fh:
            behavior = parse_behavior(fh.read())
    except OSError as exc:
        raise UsageError(f"behavior: {exc}") from None
    except BehaviorError as exc:
        raise UsageError(f"behavior: {exc}") from None
    try:
        exact = rationalize(behavior, cfg["tolerance"], cfg["max_denominator"])
    except RationalizeError as exc:
        return ["status\tdegenerate", f"reason\t{exc}"], EXIT_DEGENERATE
    try:
        verdict = check_global_space(exact, cfg["cap"])
    except BehaviorError as exc:
        raise UsageError(f"behavior: {exc}") from None
    return verdict_lines(verdict), EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "measure": cmd_measure, "lln": cmd_lln,
            "humphreys": cmd_humphreys, "feasibility": cmd_feasibility}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve(args)
        body, code = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"fiqprop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"fiqprop: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    text = "\n".join(header(args.command, cfg) + body) + "\n"
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


if __name__ == "__main__":
    sys.exit(main())
