"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: ParseError -> 4, BudgetExceeded -> 3,
every other XplainError -> 2 (validation-class failure).
"""


class XplainError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(XplainError):
    """Malformed input: bad JSON, unknown field, unparsable number."""


class ValidationError(XplainError):
    """A model failed structural validation."""


class BudgetExceeded(XplainError):
    """An exponential search or enumeration ran past its candidate budget."""


class MissingFeature(XplainError):
    """An entity does not assign a value to every feature."""


class UnknownFeature(XplainError):
    """A feature name that is not part of the feature space."""


class OutOfDomainValue(XplainError):
    """A value outside the declared domain of its feature."""


class NotBoolean(XplainError):
    """Operation requires a 2-class model."""


class FeatureSpaceMismatch(XplainError):
    """Binary operation over models with different feature spaces."""


class FeatureNotFresh(XplainError):
    """Selector feature for a disjoint disjunction is already in use."""


class BadClass(XplainError):
    """Class label outside the model's class range."""


class TautologicalClause(XplainError):
    """Clause satisfied by every entity; forbidden in CNF formulas."""


class UnknownNode(XplainError):
    """Hypergraph query over a node id that is not in the node set."""


class NotAHittingSet(XplainError):
    """Minimization asked for a set that does not hit every edge."""


class EntityRejected(XplainError):
    """Reason queries need the (booleanized) model to accept the entity."""


class NonCategoricalFeature(XplainError):
    """Operation is defined only over all-categorical feature spaces."""


class DuplicateEntity(XplainError):
    """Entity list contains the same entity twice."""


class ReadOnceViolation(XplainError):
    """A diagram repeats a feature along a root-to-leaf path."""
