"""Kind-agnostic entry points over trees, diagrams and CNF formulas."""

from .cnf import CnfFormula
from .errors import FeatureSpaceMismatch, NotBoolean, ParseError
from .fbdd import Fbdd, disjoint_disjunction_fbdds
from .literals import IN, Literal
from .tree import DecisionTree, disjoint_disjunction_trees


def evaluate(model, entity):
    return model.evaluate(entity)


def condition(model, feature, value):
    return model.condition(feature, value)


def negate(model):
    if isinstance(model, CnfFormula):
        raise NotBoolean("negation of a CNF formula is not a CNF formula")
    return model.negate()


def is_boolean(model):
    return model.is_boolean()


def model_kind(model):
    return model.kind_name


def disjoint_disjunction(m1, m2, fresh):
    """(m1 and fresh=1) or (m2 and fresh=0), fresh a new binary feature."""
    if type(m1) is not type(m2):
        raise ParseError("disjoint disjunction needs two models of the same kind")
    if isinstance(m1, DecisionTree):
        return disjoint_disjunction_trees(m1, m2, fresh)
    if isinstance(m1, Fbdd):
        return disjoint_disjunction_fbdds(m1, m2, fresh)
    if isinstance(m1, CnfFormula):
        return _disjoint_disjunction_cnf(m1, m2, fresh)
    raise ParseError(f"unsupported model type {type(m1).__name__}")


def _disjoint_disjunction_cnf(m1, m2, fresh):
    from .errors import FeatureNotFresh

    if m1.space != m2.space:
        raise FeatureSpaceMismatch("models must share one feature space")
    space = m1.space
    decl = space.feature(fresh)
    if not (decl.is_categorical and set(decl.domain) == {0, 1}):
        raise FeatureNotFresh(f"selector {fresh!r} must be categorical with domain {{0, 1}}")
    if fresh in m1.features_used() or fresh in m2.features_used():
        raise FeatureNotFresh(f"selector {fresh!r} is already used by an operand")
    lit_one = Literal(fresh, IN, frozenset((1,)))
    lit_zero = Literal(fresh, IN, frozenset((0,)))
    clauses = [clause + (lit_zero,) for clause in m1.clauses]
    clauses += [clause + (lit_one,) for clause in m2.clauses]
    return CnfFormula(space, clauses)
