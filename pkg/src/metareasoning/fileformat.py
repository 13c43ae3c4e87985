"""Canonical JSON instance documents.

Every file is one JSON object with a ``"kind"`` field and a kind-specific
body.  Rationals are written as strings (``"7/40"``, ``"3"``); integer-only
fields (knapsack data, set-cover bound, SSAT ``n``, disambiguation budget)
are plain JSON integers.  Canonical output has sorted keys, two-space
indentation and a trailing newline, so ``serialize(parse(text))`` is stable.

Layouts::

    knapsack              {"items": [[c, v], ...], "capacity": C, "target": V}
    setcover              {"universe": [...], "subsets": [[...], ...], "bound": M}
    ssat                  {"n": n, "clauses": [["x1", "-y1"], ...]}
    performance-profiles  {"profiles": [[["0", "0"], ["2", "0"], ...], ...],
                           "budget": "5", "target": "3"}
    action-evaluation     {"trees": [{"label": "A", "root": NODE}, ...], "budget": "5"}
                          NODE = {"value": "5/8"}
                               | {"cost": "2", "children": [{"p": "7/40", "node": NODE}, ...]}
    state-disambiguation  {"states": [...], "prior": {s: r}, "utility": {s: r},
                           "queries": [{"label": "q1", "answers": [[...], ...]}, ...],
                           "budget": N, "target": "5/12"}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .model import (
    INSTANCE_KINDS,
    ActionEvaluationInstance,
    DisambiguationInstance,
    EvaluationTree,
    Internal,
    InstanceError,
    KnapsackInstance,
    Leaf,
    PerformanceProfilesInstance,
    PiecewiseLinearProfile,
    Query,
    SetCoverInstance,
    SsatInstance,
    to_fraction,
)

Instance = Union[
    KnapsackInstance,
    SetCoverInstance,
    SsatInstance,
    PerformanceProfilesInstance,
    ActionEvaluationInstance,
    DisambiguationInstance,
]


class ParseError(ValueError):
    """Raised for malformed documents; ``field`` names the offending part."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class InstanceDocument:
    kind: str
    instance: Instance

    def __post_init__(self):
        expected = INSTANCE_KINDS.get(self.kind)
        if expected is None:
            raise ParseError("kind", f"unknown kind {self.kind!r}")
        if not isinstance(self.instance, expected):
            raise ParseError("kind", f"payload is not a {self.kind} instance")


def kind_of(instance: Instance) -> str:
    for kind, cls in INSTANCE_KINDS.items():
        if isinstance(instance, cls):
            return kind
    raise TypeError(f"not an instance type: {type(instance).__name__}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# --------------------------------------------------------------------------
# encoding


def _encode_node(node: EvaluationTree) -> dict:
    if isinstance(node, Leaf):
        return {"value": format_rational(node.value)}
    return {
        "cost": format_rational(node.cost),
        "children": [{"p": format_rational(p), "node": _encode_node(c)} for p, c in node.children],
    }


def _ordered(labels, order: dict[str, int]) -> list[str]:
    return sorted(labels, key=order.__getitem__)


def to_json_obj(doc: InstanceDocument | Instance) -> dict[str, Any]:
    if not isinstance(doc, InstanceDocument):
        doc = InstanceDocument(kind_of(doc), doc)
    inst = doc.instance
    body: dict[str, Any]
    if isinstance(inst, KnapsackInstance):
        body = {
            "items": [list(item) for item in inst.items],
            "capacity": inst.capacity,
            "target": inst.target,
        }
    elif isinstance(inst, SetCoverInstance):
        order = {s: i for i, s in enumerate(inst.universe)}
        body = {
            "universe": list(inst.universe),
            "subsets": [_ordered(t, order) for t in inst.subsets],
            "bound": inst.bound,
        }
    elif isinstance(inst, SsatInstance):
        body = {"n": inst.n, "clauses": [[str(l) for l in sorted(c)] for c in inst.clauses]}
    elif isinstance(inst, PerformanceProfilesInstance):
        body = {
            "profiles": [
                [[format_rational(t), format_rational(v)] for t, v in p.breakpoints]
                for p in inst.profiles
            ],
            "budget": format_rational(inst.budget),
            "target": format_rational(inst.target),
        }
    elif isinstance(inst, ActionEvaluationInstance):
        body = {
            "trees": [
                {"label": label, "root": _encode_node(tree)}
                for label, tree in zip(inst.labels, inst.trees)
            ],
            "budget": format_rational(inst.budget),
        }
    elif isinstance(inst, DisambiguationInstance):
        order = {s: i for i, s in enumerate(inst.states)}
        body = {
            "states": list(inst.states),
            "prior": {s: format_rational(inst.prior[s]) for s in inst.states},
            "utility": {s: format_rational(inst.utility[s]) for s in inst.states},
            "queries": [
                {"label": q.label, "answers": [_ordered(a, order) for a in q.answers]}
                for q in inst.queries
            ],
            "budget": inst.budget,
            "target": format_rational(inst.target),
        }
    else:  # pragma: no cover - guarded by InstanceDocument
        raise TypeError(type(inst).__name__)
    return {"kind": doc.kind, **body}


def serialize_instance(doc: InstanceDocument | Instance) -> bytes:
    """Canonical bytes for a document (or a bare instance)."""
    text = json.dumps(to_json_obj(doc), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# decoding


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ParseError(where, "expected an object")
    if key not in obj:
        raise ParseError(f"{where}.{key}" if where else key, "missing field")
    return obj[key]


def _list(value, field: str) -> list:
    if not isinstance(value, list):
        raise ParseError(field, "expected an array")
    return value


def _rational(value, field: str) -> Fraction:
    if isinstance(value, float):
        raise ParseError(field, "floating-point literals are not accepted; use \"p/q\"")
    try:
        return to_fraction(value, field)
    except InstanceError as exc:
        raise ParseError(field, str(exc).split(": ", 1)[-1]) from None


def _int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(field, f"expected an integer, got {value!r}")
    return value


def _decode_node(obj, field: str) -> EvaluationTree:
    if not isinstance(obj, dict):
        raise ParseError(field, "expected a node object")
    if "value" in obj:
        if "cost" in obj or "children" in obj:
            raise ParseError(field, "a node is either a leaf (value) or internal (cost, children)")
        return Leaf(_rational(obj["value"], f"{field}.value"))
    cost = _rational(_require(obj, "cost", field), f"{field}.cost")
    children = []
    for i, edge in enumerate(_list(_require(obj, "children", field), f"{field}.children")):
        where = f"{field}.children[{i}]"
        p = _rational(_require(edge, "p", where), f"{where}.p")
        children.append((p, _decode_node(_require(edge, "node", where), f"{where}.node")))
    try:
        return Internal(cost, tuple(children))
    except InstanceError as exc:
        raise ParseError(f"{field}.{exc.field}", str(exc).split(": ", 1)[-1]) from None


def _labels(value, field: str) -> list[str]:
    out = []
    for i, item in enumerate(_list(value, field)):
        if isinstance(item, bool) or not isinstance(item, (str, int)):
            raise ParseError(f"{field}[{i}]", f"expected a label, got {item!r}")
        out.append(str(item))
    return out


def from_json_obj(obj: Any) -> InstanceDocument:
    kind = _require(obj, "kind", "")
    if kind not in INSTANCE_KINDS:
        raise ParseError("kind", f"unknown kind {kind!r}")
    try:
        inst = _decode_body(kind, obj)
    except InstanceError as exc:
        raise ParseError(exc.field, str(exc).split(": ", 1)[-1]) from None
    return InstanceDocument(kind, inst)


def _decode_body(kind: str, obj: dict) -> Instance:
    if kind == "knapsack":
        items = []
        for i, pair in enumerate(_list(_require(obj, "items", ""), "items")):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"items[{i}]", "expected [cost, value]")
            items.append((_int(pair[0], f"items[{i}].cost"), _int(pair[1], f"items[{i}].value")))
        return KnapsackInstance(
            tuple(items),
            _int(_require(obj, "capacity", ""), "capacity"),
            _int(_require(obj, "target", ""), "target"),
        )
    if kind == "setcover":
        subsets = [
            frozenset(_labels(t, f"subsets[{i}]"))
            for i, t in enumerate(_list(_require(obj, "subsets", ""), "subsets"))
        ]
        return SetCoverInstance(
            tuple(_labels(_require(obj, "universe", ""), "universe")),
            tuple(subsets),
            _int(_require(obj, "bound", ""), "bound"),
        )
    if kind == "ssat":
        clauses = []
        for i, clause in enumerate(_list(_require(obj, "clauses", ""), "clauses")):
            lits = _list(clause, f"clauses[{i}]")
            if not all(isinstance(l, str) for l in lits):
                raise ParseError(f"clauses[{i}]", "literals must be strings like \"x1\" or \"-y2\"")
            clauses.append(frozenset(lits))
        return SsatInstance(_int(_require(obj, "n", ""), "n"), tuple(clauses))
    if kind == "performance-profiles":
        profiles = []
        for i, pts in enumerate(_list(_require(obj, "profiles", ""), "profiles")):
            where = f"profiles[{i}]"
            bps = []
            for j, pair in enumerate(_list(pts, where)):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ParseError(f"{where}[{j}]", "expected [time, value]")
                bps.append((_rational(pair[0], f"{where}[{j}].time"),
                            _rational(pair[1], f"{where}[{j}].value")))
            try:
                profiles.append(PiecewiseLinearProfile(tuple(bps)))
            except InstanceError as exc:
                raise ParseError(where, str(exc).split(": ", 1)[-1]) from None
        return PerformanceProfilesInstance(
            tuple(profiles),
            _rational(_require(obj, "budget", ""), "budget"),
            _rational(obj.get("target", "0"), "target"),
        )
    if kind == "action-evaluation":
        trees, labels = [], []
        for i, entry in enumerate(_list(_require(obj, "trees", ""), "trees")):
            where = f"trees[{i}]"
            trees.append(_decode_node(_require(entry, "root", where), f"{where}.root"))
            labels.append(str(entry.get("label", i + 1)))
        return ActionEvaluationInstance(
            tuple(trees), _rational(_require(obj, "budget", ""), "budget"), tuple(labels)
        )
    if kind == "state-disambiguation":
        states = _labels(_require(obj, "states", ""), "states")
        prior = _require(obj, "prior", "")
        utility = _require(obj, "utility", "")
        for name, mapping in (("prior", prior), ("utility", utility)):
            if not isinstance(mapping, dict):
                raise ParseError(name, "expected an object mapping state to rational")
        queries = []
        for i, q in enumerate(_list(_require(obj, "queries", ""), "queries")):
            where = f"queries[{i}]"
            if isinstance(q, list):
                q = {"answers": q}
            answers = [frozenset(_labels(a, f"{where}.answers[{j}]"))
                       for j, a in enumerate(_list(_require(q, "answers", where), f"{where}.answers"))]
            queries.append(Query(tuple(answers), str(q.get("label", f"q{i + 1}"))))
        return DisambiguationInstance(
            tuple(states),
            {s: _rational(v, f"prior[{s}]") for s, v in prior.items()},
            {s: _rational(v, f"utility[{s}]") for s, v in utility.items()},
            tuple(queries),
            _int(_require(obj, "budget", ""), "budget"),
            _rational(obj.get("target", "0"), "target"),
        )
    raise ParseError("kind", f"unknown kind {kind!r}")  # pragma: no cover


def parse_instance(text: bytes | str) -> InstanceDocument:
    """Parse a document; raises :class:`ParseError` naming the offending field."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("document", f"not UTF-8: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("document", f"invalid JSON: {exc}") from None
    return from_json_obj(obj)


def load_instance(path) -> InstanceDocument:
    with open(path, "rb") as fh:
        return parse_instance(fh.read())


def dump_instance(doc: InstanceDocument | Instance, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_instance(doc))
