"""Literals over categorical and numerical features, and clause tautology.

Categorical literals test membership of a value set (`in` / `not_in`);
numerical literals compare against a threshold (`leq` / `gt`). Negation
flips the operator.
"""

from dataclasses import dataclass

from .errors import ParseError
from .values import domain_interval, format_number

IN, NOT_IN, LEQ, GT = "in", "not_in", "leq", "gt"

_NEGATED = {IN: NOT_IN, NOT_IN: IN, LEQ: GT, GT: LEQ}


@dataclass(frozen=True)
class Literal:
    feature: str
    op: str
    value: object  # frozenset of categorical values, or an exact threshold

    def __post_init__(self):
        if self.op not in _NEGATED:
            raise ParseError(f"unknown literal operator {self.op!r}")
        if self.op in (IN, NOT_IN):
            object.__setattr__(self, "value", frozenset(self.value))

    def negate(self):
        return Literal(self.feature, _NEGATED[self.op], self.value)

    def holds(self, entity):
        value = entity.value(self.feature)
        if self.op == IN:
            return value in self.value
        if self.op == NOT_IN:
            return value not in self.value
        if self.op == LEQ:
            return value <= self.value
        return value > self.value

    def __str__(self):
        if self.op in (IN, NOT_IN):
            shown = ",".join(sorted(str(v) for v in self.value))
            sym = "in" if self.op == IN else "not in"
            return f"{self.feature} {sym} {{{shown}}}"
        sym = "<=" if self.op == LEQ else ">"
        return f"{self.feature} {sym} {format_number(self.value)}"


def check_literal(space, literal):
    """Enforce the structural invariants of a literal against its space."""
    decl = space.feature(literal.feature)
    if literal.op in (IN, NOT_IN):
        if not decl.is_categorical:
            raise ParseError(f"set test on numerical feature {decl.name!r}")
        pos = space.position(decl.name)
        mask = space.value_mask(pos, literal.value)
        if mask == 0:
            raise ParseError(f"empty value set on {decl.name!r}")
        if mask == space.full_mask(pos):
            raise ParseError(f"value set on {decl.name!r} covers the whole domain")
    else:
        if decl.is_categorical:
            raise ParseError(f"threshold test on categorical feature {decl.name!r}")
        if not (decl.lo <= literal.value < decl.hi):
            raise ParseError(
                f"threshold {format_number(literal.value)} on {decl.name!r} "
                f"outside [{format_number(decl.lo)}, {format_number(decl.hi)})"
            )


def clause_is_tautological(space, clause):
    """True iff the disjunction of `clause` holds for every entity.

    Checked exactly: the clause is a tautology iff its negation (a
    conjunction of negated literals) leaves some touched feature with an
    empty set of allowed values.
    """
    cat_allowed = {}
    num_allowed = {}
    for lit in clause:
        pos = space.position(lit.feature)
        decl = space.features[pos]
        if lit.op in (IN, NOT_IN):
            mask = cat_allowed.get(pos)
            if mask is None:
                mask = space.full_mask(pos)
            lit_mask = space.value_mask(pos, lit.value)
            # negated literal: 'in S' forbids S, 'not_in S' confines to S
            mask &= ~lit_mask if lit.op == IN else lit_mask
            if mask == 0:
                return True
            cat_allowed[pos] = mask
        else:
            lo, hi = num_allowed.get(pos) or domain_interval(decl.lo, decl.hi)
            point = (lit.value, 0)
            if lit.op == LEQ:  # negation: value > threshold
                lo = max(lo, point)
            else:              # negation: value <= threshold
                hi = min(hi, point)
            if lo >= hi:
                return True
            num_allowed[pos] = (lo, hi)
    return False


def make_leq(feature, threshold):
    from .values import exact

    return Literal(feature, LEQ, exact(threshold))


def make_in(feature, values):
    return Literal(feature, IN, frozenset(values))
