"""CNF formulas as boolean classifiers.

A formula is a conjunction of clauses; a clause is a disjunction of
literals. Tautological clauses are rejected at construction (normalize
first if you may hold some). Clauses may be empty only as the result of
conditioning: the empty clause is unsatisfiable, so the formula then
rejects every entity — that is a representable state, not an error.
"""

from .errors import TautologicalClause
from .literals import IN, LEQ, NOT_IN, check_literal, clause_is_tautological


def normalize_clauses(space, clauses):
    """Drop tautologically-true clauses; the conjunction is unchanged."""
    return tuple(
        tuple(clause) for clause in clauses
        if not clause_is_tautological(space, clause)
    )


class CnfFormula:
    __slots__ = ("space", "clauses", "_compiled")

    def __init__(self, space, clauses, _skip_checks=False):
        self.space = space
        self.clauses = tuple(tuple(clause) for clause in clauses)
        self._compiled = None
        if _skip_checks:
            return
        for i, clause in enumerate(self.clauses):
            for lit in clause:
                check_literal(space, lit)
            if clause and clause_is_tautological(space, clause):
                raise TautologicalClause(f"clause {i} is tautologically true")

    @property
    def kind(self):
        return "cnf"

    def size(self):
        return sum(len(c) for c in self.clauses)

    def _compile(self):
        # positional literal forms: (pos, op, payload); cat payload is a bitmask
        if self._compiled is None:
            space = self.space
            compiled = []
            for clause in self.clauses:
                row = []
                for lit in clause:
                    pos = space.position(lit.feature)
                    if lit.op in (IN, NOT_IN):
                        row.append((pos, lit.op, space.value_mask(pos, lit.value)))
                    else:
                        row.append((pos, lit.op, lit.value))
                compiled.append(tuple(row))
            self._compiled = tuple(compiled)
        return self._compiled

    def _literal_holds(self, entry, raw):
        pos, op, payload = entry
        if op == IN:
            return (payload >> raw[pos]) & 1 == 1
        if op == NOT_IN:
            return (payload >> raw[pos]) & 1 == 0
        if op == LEQ:
            return raw[pos] <= payload
        return raw[pos] > payload

    def evaluate(self, entity):
        raw = entity.raw
        for clause in self._compile():
            if not any(self._literal_holds(entry, raw) for entry in clause):
                return 0
        return 1

    def condition(self, feature, value):
        """The formula M_{x=b}: satisfied clauses drop, falsified literals drop."""
        probe = _ConstantProbe(self.space, feature, value)
        new_clauses = []
        for clause in self.clauses:
            kept = []
            satisfied = False
            for lit in clause:
                if lit.feature != feature:
                    kept.append(lit)
                    continue
                if probe.holds(lit):
                    satisfied = True
                    break
            if not satisfied:
                new_clauses.append(tuple(kept))
        return CnfFormula(self.space, new_clauses, _skip_checks=True)

    def features_used(self):
        return {lit.feature for clause in self.clauses for lit in clause}

    def thresholds_for(self, feature):
        out = set()
        for clause in self.clauses:
            for lit in clause:
                if lit.feature == feature and lit.op not in (IN, NOT_IN):
                    out.add(lit.value)
        return out

    def __repr__(self):
        return f"CnfFormula({len(self.clauses)} clauses over {len(self.space)} features)"


class _ConstantProbe:
    """Evaluates literals on a single fixed feature value."""

    __slots__ = ("feature", "value")

    def __init__(self, space, feature, value):
        decl = space.feature(feature)
        if decl.is_categorical:
            pos = space.position(feature)
            space.value_bit(pos, value)  # domain check
            self.value = value
        else:
            from .values import exact
            from .errors import OutOfDomainValue

            value = exact(value)
            if not (decl.lo <= value <= decl.hi):
                raise OutOfDomainValue(f"{feature!r} = {value} outside its domain")
            self.value = value
        self.feature = feature

    def holds(self, lit):
        if lit.op == IN:
            return self.value in lit.value
        if lit.op == NOT_IN:
            return self.value not in lit.value
        if lit.op == LEQ:
            return self.value <= lit.value
        return self.value > lit.value
