"""Logic-based classifier explanations.

Sufficient reasons, relevant/necessary features, usefulness and usefulness
scores for decision trees, free binary decision diagrams and CNF
classifiers, each fast algorithm paired with a brute-force oracle.
"""

from .cnf import CnfFormula, normalize_clauses
from .errors import (
    BadClass,
    BudgetExceeded,
    DuplicateEntity,
    EntityRejected,
    FeatureNotFresh,
    FeatureSpaceMismatch,
    MissingFeature,
    NonCategoricalFeature,
    NotAHittingSet,
    NotBoolean,
    OutOfDomainValue,
    ParseError,
    ReadOnceViolation,
    TautologicalClause,
    UnknownFeature,
    UnknownNode,
    ValidationError,
    XplainError,
)
from .fbdd import Fbdd, check_read_once, unfold_to_tree
from .hypergraph import (
    Hypergraph,
    is_hitting_set,
    k_minimal_hitting_sets_containing,
    minimal_hitting_set_containing,
    minimize_hitting_set,
    remove_superset_edges,
)
from .literals import Literal, clause_is_tautological, make_in, make_leq
from .models import condition, disjoint_disjunction, evaluate, negate
from .necessity import (
    all_necessary,
    all_necessary_fbdd,
    all_necessary_tree,
    cell_representatives,
    is_necessary,
    taut_categorical,
    taut_numeric,
)
from .oracle import OracleBudget
from .reasons import (
    ReasonHypergraph,
    RestrictedCnf,
    hypergraph_to_tree_instance,
    is_reason,
    is_sufficient_reason,
    reason_hypergraph,
    restrict_cnf_to_entity,
    sparse_model_to_tree,
    tree_to_path_cnf,
)
from .relevance import (
    CountOrMore,
    RelevanceAnswer,
    all_relevant,
    count_sufficient_reasons_with,
    is_relevant,
    sufficient_reason_containing,
)
from .space import Entity, FeatureDecl, FeatureSpace
from .tree import DecisionTree, TreeBuilder, conjoin, simplify
from .usefulness import (
    UsefulnessScore,
    as_tree,
    cnf_to_tree,
    equivalent,
    is_useful,
    model_count,
    score_all,
    usefulness_score,
)
from .validate import ValidationReport, validate
from .values import INF, NEG_INF, exact

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
