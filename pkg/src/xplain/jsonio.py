"""JSON interchange for feature spaces, models and entities.

The exact field names are fixed in docs/format.md. Rational numbers are
serialized as strings ("17/20"); integers stay JSON integers; numerical
domain bounds use "inf" / "-inf".
"""

import json

from .cnf import CnfFormula
from .errors import ParseError
from .fbdd import F_LEAF, F_NODE, Fbdd
from .literals import GT, IN, LEQ, NOT_IN, Literal
from .space import Entity, FeatureDecl, FeatureSpace
from .tree import K_LEAF, K_NUM, DecisionTree, TreeBuilder
from .values import exact, parse_bound, serialize_bound, serialize_number


def canonical_dumps(obj):
    """Canonical JSON: sorted keys, two-space indent, trailing newline.

    Parsing this output and re-serializing it is byte-identical (no floats
    ever appear in reports).
    """
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(cond, message):
    if not cond:
        raise ParseError(message)


def parse_feature_space(data):
    _require(isinstance(data, list), "feature_space must be a list")
    decls = []
    for row in data:
        _require(isinstance(row, dict), "feature declaration must be an object")
        _require("id" in row and "kind" in row, "feature declaration needs id and kind")
        name = row["id"]
        if row["kind"] == "categorical":
            _require("domain" in row, f"categorical feature {name!r} needs a domain")
            decls.append(FeatureDecl.categorical(name, row["domain"]))
        elif row["kind"] == "numerical":
            decls.append(
                FeatureDecl.numerical(
                    name,
                    parse_bound(row.get("min", "-inf")),
                    parse_bound(row.get("max", "inf")),
                )
            )
        else:
            raise ParseError(f"unknown feature kind {row['kind']!r}")
    return FeatureSpace(tuple(decls))


def dump_feature_space(space):
    rows = []
    for decl in space.features:
        if decl.is_categorical:
            rows.append(
                {
                    "id": decl.name,
                    "kind": "categorical",
                    "domain": [v if isinstance(v, str) else serialize_number(v)
                               for v in decl.domain],
                }
            )
        else:
            rows.append(
                {
                    "id": decl.name,
                    "kind": "numerical",
                    "min": serialize_bound(decl.lo),
                    "max": serialize_bound(decl.hi),
                }
            )
    return rows


def _parse_literal(space, data):
    _require(isinstance(data, dict) and "feature" in data and "test" in data,
             "literal needs feature and test")
    test = data["test"]
    _require(isinstance(test, dict) and len(test) == 1, "literal test must have one key")
    ((op, payload),) = test.items()
    if op in (IN, NOT_IN):
        values = frozenset(
            v if isinstance(v, str) else exact(v) for v in payload
        )
        return Literal(data["feature"], op, values)
    if op in (LEQ, GT):
        return Literal(data["feature"], op, exact(payload))
    raise ParseError(f"unknown literal operator {op!r}")


def _dump_literal(lit):
    if lit.op in (IN, NOT_IN):
        payload = sorted(
            (v if isinstance(v, str) else serialize_number(v) for v in lit.value),
            key=str,
        )
    else:
        payload = serialize_number(lit.value)
    return {"feature": lit.feature, "test": {lit.op: payload}}


def _parse_tree(space, data):
    _require("nodes" in data and "root" in data, "tree model needs nodes and root")
    k = data.get("classes", 2)
    _require(isinstance(k, int) and k >= 2, "classes must be an integer >= 2")
    rows = {}
    for row in data["nodes"]:
        _require(isinstance(row, dict) and "id" in row, "tree node needs an id")
        _require(row["id"] not in rows, f"duplicate node id {row['id']!r}")
        rows[row["id"]] = row
    _require(data["root"] in rows, "root id not among the nodes")

    builder = TreeBuilder(space)
    expanded_internal = set()

    def build(node_id, depth):
        if depth > len(rows) + 1:
            raise ParseError("tree nodes form a cycle")
        row = rows.get(node_id)
        _require(row is not None, f"dangling node reference {node_id!r}")
        if "leaf" in row:
            label = row["leaf"]
            _require(isinstance(label, int) and 0 <= label < k,
                     f"leaf label {label!r} outside 0..{k - 1}")
            # shared leaves are legal in the interchange format; each use
            # becomes its own node so the in-memory model is a true tree
            return builder.add_leaf(label)
        if node_id in expanded_internal:
            raise ParseError(f"internal node {node_id!r} is shared (only leaves may be)")
        expanded_internal.add(node_id)
        _require("feature" in row and "test" in row and "left" in row and "right" in row,
                 f"internal node {node_id!r} needs feature/test/left/right")
        test = row["test"]
        _require(isinstance(test, dict) and len(test) == 1,
                 f"node {node_id!r} test must have exactly one key")
        lid = build(row["left"], depth + 1)
        rid = build(row["right"], depth + 1)
        if "leq" in test:
            return builder.add_num(row["feature"], exact(test["leq"]), lid, rid)
        if "in" in test:
            values = [v if isinstance(v, str) else exact(v) for v in test["in"]]
            return builder.add_cat(row["feature"], values, lid, rid)
        raise ParseError(f"node {node_id!r} test must be 'leq' or 'in'")

    return builder.build(build(data["root"], 0), k=k)


def _dump_tree(t):
    nodes = []
    names = t.space.names
    for v in range(t.size):
        if t.kind[v] == K_LEAF:
            nodes.append({"id": v, "leaf": t.arg[v]})
        elif t.kind[v] == K_NUM:
            nodes.append(
                {
                    "id": v,
                    "feature": names[t.feat[v]],
                    "test": {"leq": serialize_number(t.arg[v])},
                    "left": t.left[v],
                    "right": t.right[v],
                }
            )
        else:
            values = t.space.mask_values(t.feat[v], t.arg[v])
            nodes.append(
                {
                    "id": v,
                    "feature": names[t.feat[v]],
                    "test": {"in": [x if isinstance(x, str) else serialize_number(x)
                                    for x in values]},
                    "left": t.left[v],
                    "right": t.right[v],
                }
            )
    return {"kind": "tree", "classes": t.k, "root": t.root, "nodes": nodes}


def _parse_fbdd(space, data):
    _require("nodes" in data and "root" in data, "fbdd model needs nodes and root")
    ids = []
    rows = {}
    for row in data["nodes"]:
        _require(isinstance(row, dict) and "id" in row, "fbdd node needs an id")
        _require(row["id"] not in rows, f"duplicate node id {row['id']!r}")
        rows[row["id"]] = row
        ids.append(row["id"])
    _require(data["root"] in rows, "root id not among the nodes")
    remap = {node_id: i for i, node_id in enumerate(ids)}
    kind, feat, arg, left, right = [], [], [], [], []
    for node_id in ids:
        row = rows[node_id]
        if "leaf" in row:
            kind.append(F_LEAF)
            feat.append(-1)
            arg.append(row["leaf"])
            left.append(-1)
            right.append(-1)
        else:
            _require("feature" in row and "left" in row and "right" in row,
                     f"fbdd node {node_id!r} needs feature/left/right")
            _require(row["left"] in remap and row["right"] in remap,
                     f"dangling child reference at node {node_id!r}")
            kind.append(F_NODE)
            feat.append(space.position(row["feature"]))
            arg.append(-1)
            left.append(remap[row["left"]])
            right.append(remap[row["right"]])
    return Fbdd(space, kind, feat, arg, left, right, remap[data["root"]])


def _dump_fbdd(d):
    nodes = []
    names = d.space.names
    for v in range(d.size):
        if d.kind[v] == F_LEAF:
            nodes.append({"id": v, "leaf": d.arg[v]})
        else:
            nodes.append(
                {
                    "id": v,
                    "feature": names[d.feat[v]],
                    "left": d.left[v],
                    "right": d.right[v],
                }
            )
    return {"kind": "fbdd", "root": d.root, "nodes": nodes}


def _parse_cnf(space, data):
    _require("clauses" in data, "cnf model needs clauses")
    clauses = []
    for i, clause in enumerate(data["clauses"]):
        _require(isinstance(clause, list) and clause, f"clause {i} must be a nonempty list")
        clauses.append(tuple(_parse_literal(space, lit) for lit in clause))
    return CnfFormula(space, clauses)


def _dump_cnf(cnf):
    return {
        "kind": "cnf",
        "clauses": [[_dump_literal(lit) for lit in clause] for clause in cnf.clauses],
    }


def parse_model_document(data):
    """Parse {"feature_space": [...], "model": {...}} into (space, model)."""
    _require(isinstance(data, dict), "model document must be an object")
    _require("feature_space" in data and "model" in data,
             "model document needs feature_space and model")
    space = parse_feature_space(data["feature_space"])
    body = data["model"]
    _require(isinstance(body, dict) and "kind" in body, "model needs a kind")
    if body["kind"] == "tree":
        model = _parse_tree(space, body)
    elif body["kind"] == "fbdd":
        model = _parse_fbdd(space, body)
    elif body["kind"] == "cnf":
        model = _parse_cnf(space, body)
    else:
        raise ParseError(f"unknown model kind {body['kind']!r}")
    return space, model


def dump_model_document(model):
    if isinstance(model, DecisionTree):
        body = _dump_tree(model)
    elif isinstance(model, Fbdd):
        body = _dump_fbdd(model)
    elif isinstance(model, CnfFormula):
        body = _dump_cnf(model)
    else:
        raise ParseError(f"cannot serialize object of type {type(model).__name__}")
    return {"feature_space": dump_feature_space(model.space), "model": body}


def parse_entity_document(space, data):
    _require(isinstance(data, dict) and "values" in data, "entity document needs values")
    values = data["values"]
    _require(isinstance(values, dict), "entity values must be an object")
    mapping = {}
    for name, value in values.items():
        decl = space.feature(name)
        if decl.is_categorical and isinstance(value, str) and value not in decl.domain:
            # tolerate numbers written as strings for numeric-valued domains
            try:
                mapping[name] = exact(value)
            except ParseError:
                mapping[name] = value
        elif not decl.is_categorical:
            mapping[name] = exact(value)
        else:
            mapping[name] = value
    return Entity(space, mapping)


def dump_entity_document(entity):
    values = {}
    for name, value in entity.as_dict().items():
        values[name] = value if isinstance(value, str) else serialize_number(value)
    return {"values": values}


def load_model_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ParseError(f"{path} is not valid JSON: {err}") from err
    return parse_model_document(data)


def load_entity_file(space, path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ParseError(f"{path} is not valid JSON: {err}") from err
    return parse_entity_document(space, data)
