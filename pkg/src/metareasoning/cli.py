"""``metareason`` command-line front end.

Exit codes: 0 success, 2 input or usage error, 3 reduction verification failed.
"""

from __future__ import annotations

import argparse
import decimal
import inspect
import json
import sys
from fractions import Fraction

from . import disambiguation, evaluation, generators, oracles, profiles
from .fileformat import InstanceDocument, ParseError, load_instance, serialize_instance
from .model import INSTANCE_KINDS, InstanceError, to_fraction
from .reductions import REDUCTIONS

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_EQUIVALENT = 3

NORMALIZATIONS = {
    "uniform-prior": disambiguation.to_uniform_prior,
    "constant-utility": disambiguation.to_constant_utility,
}


class UsageError(Exception):
    pass


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def approx(x: Fraction) -> str:
    with decimal.localcontext() as ctx:
        ctx.prec = 12
        return str(decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator))


def _emit(report: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _load(path: str, kind: str) -> InstanceDocument:
    doc = load_instance(path)
    if doc.kind != kind:
        raise UsageError(f"{path} holds a {doc.kind} instance, expected {kind}")
    return doc


def _write(doc, path: str | None) -> None:
    data = serialize_instance(doc)
    if path is None or path == "-":
        sys.stdout.write(data.decode("utf-8"))
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _add_decimal(report: dict, keys=("value",)) -> None:
    for key in keys:
        if key in report:
            report[f"{key}_decimal"] = f"~{approx(Fraction(report[key]))} (approximate, non-authoritative)"


def _ae_policy_json(policy: evaluation.AePolicy, labels) -> dict:
    if policy.action is None:
        return {"stop": True, "value": fmt(policy.value)}
    return {
        "evaluate": labels[policy.action],
        "value": fmt(policy.value),
        "outcomes": [
            {"p": fmt(p), "then": _ae_policy_json(sub, labels)} for p, sub in policy.outcomes
        ],
    }


def _tree_index(instance, which: str | None) -> int:
    if which is None:
        return 0
    if which in instance.labels:
        return instance.labels.index(which)
    raise UsageError(f"no tree labelled {which!r}; labels are {list(instance.labels)}")


# --------------------------------------------------------------------------
# commands


def solve_report(doc: InstanceDocument, args) -> dict:
    inst = doc.instance
    report: dict = {"kind": doc.kind}
    if doc.kind == "performance-profiles":
        alloc = profiles.optimal_allocation(inst)
        report.update(
            answer=alloc.value >= inst.target,
            value=fmt(alloc.value),
            target=fmt(inst.target),
            allocation=[fmt(t) for t in alloc.times],
        )
    elif doc.kind == "action-evaluation":
        value, policy = evaluation.optimal_policy_value(inst)
        firsts = evaluation.first_step_optimal_set(inst)
        index = _tree_index(inst, getattr(args, "action", None))
        report.update(
            answer=index in firsts,
            action=inst.labels[index],
            value=fmt(value),
            first_step_set=[inst.labels[i] for i in sorted(firsts)],
            first_step_values={inst.labels[i]: fmt(v) for i, v in evaluation.first_step_values(inst).items()},
            policy=_ae_policy_json(policy, inst.labels),
        )
    elif doc.kind == "state-disambiguation":
        value, policy = disambiguation.optimal_expected_utility(inst, getattr(args, "allow_repeats", False))
        report.update(
            answer=value >= inst.target,
            value=fmt(value),
            target=fmt(inst.target),
            policy=policy.to_json(),
            policy_text=policy.describe(inst),
        )
    else:
        report.update(oracle_report(doc, args))
    if getattr(args, "decimal", False):
        _add_decimal(report)
    return report


def oracle_report(doc: InstanceDocument, args) -> dict:
    inst = doc.instance
    if doc.kind == "knapsack":
        return {"kind": doc.kind, "answer": oracles.solve_knapsack(inst)}
    if doc.kind == "setcover":
        return {"kind": doc.kind, "answer": oracles.solve_setcover(inst)}
    if doc.kind == "ssat":
        value = oracles.solve_ssat(inst)
        return {"kind": doc.kind, "answer": value >= Fraction(1, 2), "value": fmt(value)}
    if doc.kind == "performance-profiles":
        step = to_fraction(getattr(args, "step", None) or "1", "step")
        try:
            value = profiles.grid_oracle_pp(inst, step)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return {"kind": doc.kind, "step": fmt(step), "value": fmt(value), "answer": value >= inst.target}
    if doc.kind == "action-evaluation":
        value = oracles.exhaustive_ae_value(inst)
        firsts = oracles.exhaustive_ae_first_step_values(inst)
        return {
            "kind": doc.kind,
            "value": fmt(value),
            "first_step_values": {inst.labels[i]: fmt(v) for i, v in firsts.items()},
        }
    value = oracles.exhaustive_sd_value(inst, getattr(args, "allow_repeats", False))
    return {"kind": doc.kind, "value": fmt(value), "answer": value >= inst.target}


def cmd_solve(args) -> int:
    doc = _load(args.file, args.kind)
    _emit(solve_report(doc, args))
    return EXIT_OK


def cmd_oracle(args) -> int:
    doc = _load(args.file, args.kind)
    report = oracle_report(doc, args)
    if args.decimal:
        _add_decimal(report)
    _emit(report)
    return EXIT_OK


def cmd_reduce(args) -> int:
    source_kind, _, transform = REDUCTIONS[args.kind]
    doc = _load(args.input, source_kind)
    try:
        target = transform(doc.instance)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(target, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    source_kind = REDUCTIONS[args.kind][0]
    doc = _load(args.input, source_kind)
    try:
        target = oracles.corrupt_target(args.kind, doc) if args.inject_fault else None
        report = oracles.verify_reduction(args.kind, doc, target)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(report.to_json())
    return EXIT_OK if report.equivalent else EXIT_NOT_EQUIVALENT


# generator flags: (flag, generator keyword, type)
_GEN_FLAGS = [
    ("--items", "items", int),
    ("--max-cost", "max_cost", int),
    ("--max-value", "max_value", int),
    ("--universe", "universe", int),
    ("--subsets", "subsets", int),
    ("--n", "n", int),
    ("--clauses", "clauses", int),
    ("--max-width", "max_width", int),
    ("--profiles", "profiles", int),
    ("--breakpoints", "breakpoints", int),
    ("--max-step", "max_step", int),
    ("--max-rise", "max_rise", int),
    ("--budget", "budget", int),
    ("--trees", "trees", int),
    ("--depth", "depth", int),
    ("--branching", "branching", int),
    ("--states", "states", int),
    ("--queries", "queries", int),
    ("--max-answers", "max_answers", int),
    ("--max-utility", "max_utility", int),
]


def cmd_generate(args) -> int:
    func = generators._GENERATORS[args.kind]
    accepted = set(inspect.signature(func).parameters)
    params = {}
    for _, name, _ in _GEN_FLAGS:
        value = getattr(args, name)
        if value is None:
            continue
        if name not in accepted:
            raise UsageError(f"--{name.replace('_', '-')} does not apply to {args.kind}")
        params[name] = value
    for flag in ("concave",):
        if getattr(args, flag):
            if flag not in accepted:
                raise UsageError(f"--{flag} does not apply to {args.kind}")
            params[flag] = True
    try:
        config = generators.GeneratorConfig(args.kind, args.seed, tuple(sorted(params.items())))
        instance = generators.generate(config)
    except (ValueError, InstanceError) as exc:
        raise UsageError(str(exc)) from None
    _write(instance, args.output)
    return EXIT_OK


def cmd_normalize(args) -> int:
    doc = _load(args.input, "state-disambiguation")
    try:
        out = NORMALIZATIONS[args.transform](doc.instance)
    except disambiguation.DegenerateInstanceError as exc:
        raise UsageError(str(exc)) from None
    _write(out, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metareason",
        description="Exact metareasoning solvers, reduction gadgets and brute-force oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = sorted(INSTANCE_KINDS)

    p = sub.add_parser("solve", help="solve an instance exactly")
    p.add_argument("kind", choices=kinds)
    p.add_argument("file")
    p.add_argument("--action", help="action-evaluation: tree label to ask the first-step question about")
    p.add_argument("--allow-repeats", action="store_true", help="state-disambiguation: allow re-asking a query")
    p.add_argument("--decimal", action="store_true", help="add a non-authoritative decimal approximation")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="run the brute-force reference solver")
    p.add_argument("kind", choices=kinds)
    p.add_argument("file")
    p.add_argument("--step", help="performance-profiles: lattice step (default 1)")
    p.add_argument("--allow-repeats", action="store_true")
    p.add_argument("--decimal", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="apply a reduction and write the target instance")
    p.add_argument("kind", choices=sorted(REDUCTIONS))
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check source oracle against target solver")
    p.add_argument("kind", choices=sorted(REDUCTIONS))
    p.add_argument("input")
    p.add_argument("--inject-fault", action="store_true",
                   help="verify against a deliberately corrupted target (must exit 3)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a seeded random instance")
    p.add_argument("kind", choices=kinds)
    p.add_argument("--seed", type=int, default=0)
    for flag, name, typ in _GEN_FLAGS:
        p.add_argument(flag, dest=name, type=typ)
    p.add_argument("--concave", action="store_true", help="performance-profiles: concave profiles only")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("normalize", help="uniform-prior or constant-utility transform")
    p.add_argument("transform", choices=sorted(NORMALIZATIONS))
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_normalize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InstanceError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
