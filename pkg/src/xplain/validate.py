"""Structural validation reports for trees, diagrams and CNF formulas."""

from dataclasses import dataclass

from .cnf import CnfFormula
from .errors import ParseError, ReadOnceViolation, ValidationError
from .fbdd import F_LEAF, Fbdd, check_read_once
from .literals import check_literal, clause_is_tautological
from .tree import K_CAT, K_LEAF, K_NUM, DecisionTree


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    node: int | None = None

    def to_dict(self):
        out = {"code": self.code, "message": self.message}
        if self.node is not None:
            out["node"] = self.node
        return out


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple

    @property
    def ok(self):
        return not self.findings

    def to_dict(self):
        return {"ok": self.ok, "findings": [f.to_dict() for f in self.findings]}


def validate(model):
    if isinstance(model, DecisionTree):
        return ValidationReport(tuple(_tree_findings(model)))
    if isinstance(model, Fbdd):
        return ValidationReport(tuple(_fbdd_findings(model)))
    if isinstance(model, CnfFormula):
        return ValidationReport(tuple(_cnf_findings(model)))
    raise ParseError(f"cannot validate object of type {type(model).__name__}")


def _tree_findings(t):
    space = t.space
    n = t.size
    parents = [0] * n
    for v in range(n):
        if t.kind[v] != K_LEAF:
            parents[t.left[v]] += 1
            parents[t.right[v]] += 1
    # reachability / cycle detection from the root
    seen = set()
    stack = [t.root]
    cycle = False
    while stack:
        v = stack.pop()
        if v in seen:
            cycle = True
            break
        seen.add(v)
        if t.kind[v] != K_LEAF:
            stack.append(t.left[v])
            stack.append(t.right[v])
    if cycle:
        yield Finding("cycle", "node graph is not a tree (cycle or shared node)")
    else:
        if parents[t.root] != 0:
            yield Finding("root-parent", "root has an incoming edge", t.root)
        for v in range(n):
            if v != t.root and parents[v] != 1:
                yield Finding(
                    "parent-count",
                    f"node {v} has {parents[v]} parents (expected 1)",
                    v,
                )
        unreachable = [v for v in range(n) if v not in seen]
        for v in unreachable:
            yield Finding("unreachable", f"node {v} is not reachable from the root", v)
    for v in range(n):
        if t.kind[v] == K_LEAF:
            if not (0 <= t.arg[v] < t.k):
                yield Finding(
                    "bad-leaf-label",
                    f"leaf label {t.arg[v]} outside 0..{t.k - 1}",
                    v,
                )
        elif t.kind[v] == K_CAT:
            decl = space.features[t.feat[v]]
            if not decl.is_categorical:
                yield Finding("bad-test", f"set test over numerical {decl.name!r}", v)
                continue
            full = space.full_mask(t.feat[v])
            if t.arg[v] & full == 0:
                yield Finding("empty-test", f"empty value set on {decl.name!r}", v)
            elif t.arg[v] & full == full:
                yield Finding(
                    "full-test", f"value set on {decl.name!r} covers its whole domain", v
                )
        elif t.kind[v] == K_NUM:
            decl = space.features[t.feat[v]]
            if decl.is_categorical:
                yield Finding("bad-test", f"threshold test over categorical {decl.name!r}", v)
            elif not (decl.lo <= t.arg[v] < decl.hi):
                yield Finding(
                    "bad-threshold",
                    f"threshold on {decl.name!r} outside [{decl.lo}, {decl.hi})",
                    v,
                )


def _fbdd_findings(d):
    n = d.size
    in_degree = [0] * n
    for v in range(n):
        if d.kind[v] != F_LEAF:
            in_degree[d.left[v]] += 1
            in_degree[d.right[v]] += 1
    if in_degree[d.root] != 0:
        yield Finding("root-parent", "root has an incoming edge", d.root)
    for v in range(n):
        if v != d.root and in_degree[v] == 0:
            yield Finding("unreachable", f"node {v} has no incoming edge", v)
    try:
        check_read_once(d)
    except ReadOnceViolation as err:
        yield Finding("read-once", str(err))
    except ValidationError as err:
        yield Finding("cycle", str(err))
    for v in range(n):
        if d.kind[v] == F_LEAF and d.arg[v] not in (0, 1):
            yield Finding("bad-leaf-label", f"leaf label {d.arg[v]} is not 0/1", v)


def _cnf_findings(cnf):
    for i, clause in enumerate(cnf.clauses):
        bad = False
        for lit in clause:
            try:
                check_literal(cnf.space, lit)
            except Exception as err:  # noqa: BLE001 - reported, not raised
                bad = True
                yield Finding("bad-literal", f"clause {i}: {err}")
        if not bad and clause and clause_is_tautological(cnf.space, clause):
            yield Finding("tautological-clause", f"clause {i} is tautologically true")
