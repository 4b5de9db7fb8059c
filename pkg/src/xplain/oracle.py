"""Brute-force reference implementations.

Everything here is an exhaustive search used as ground truth by the
property tests and by the CLI's --oracle-check mode. Numerical features
are handled through one representative value per threshold cell of the
model under test. All iteration orders are fixed, so outputs are
deterministic. These are correctness anchors, not fast paths.
"""

from dataclasses import dataclass
from itertools import combinations, product

from .errors import BudgetExceeded
from .necessity import cell_index, cell_representatives
from .space import Entity


@dataclass(frozen=True)
class OracleBudget:
    max_entities: int = 2**12
    max_subsets: int = 2**16


DEFAULT_BUDGET = OracleBudget()


def _representative_grid(model, budget):
    """Per-feature value lists covering the model's behavior exactly.

    Categorical features contribute their whole domain; numerical ones one
    representative per cell induced by the model's own thresholds.
    """
    space = model.space
    grid = []
    total = 1
    for decl in space.features:
        if decl.is_categorical:
            values = list(decl.domain)
        else:
            values = cell_representatives(decl, sorted(model.thresholds_for(decl.name)))
        grid.append(values)
        total *= len(values)
        if total > budget.max_entities:
            raise BudgetExceeded(
                f"representative grid exceeds {budget.max_entities} entities"
            )
    return grid


def _prediction_table(model, grid):
    """Class of every representative entity, keyed by value combination."""
    space = model.space
    table = {}
    for combo in product(*grid):
        entity = Entity(space, dict(zip(space.names, combo)))
        table[combo] = model.evaluate(entity)
    return table


def _normalize_to_grid(model, entity, grid):
    """Snap numerical values onto their cell representative."""
    space = model.space
    combo = []
    for pos, decl in enumerate(space.features):
        if decl.is_categorical:
            combo.append(entity.value(decl.name))
        else:
            thresholds = sorted(model.thresholds_for(decl.name))
            combo.append(grid[pos][cell_index(thresholds, entity.value(decl.name))])
    return tuple(combo)


def enumerate_sufficient_reasons(model, entity, budget=DEFAULT_BUDGET):
    """All inclusion-minimal reasons, by direct subset-lattice evaluation.

    Subsets are scanned in ascending cardinality, so minimality holds as
    soon as no previously found reason is contained in the candidate.
    """
    space = model.space
    names = space.names
    n = len(names)
    if 2**n > budget.max_subsets:
        raise BudgetExceeded(f"{2**n} subsets exceed {budget.max_subsets}")
    grid = _representative_grid(model, budget)
    table = _prediction_table(model, grid)
    base_combo = _normalize_to_grid(model, entity, grid)
    base = table[base_combo]

    def is_reason(positions):
        free = [p for p in range(n) if p not in positions]
        combo = list(base_combo)
        for assignment in product(*(grid[p] for p in free)):
            for p, value in zip(free, assignment):
                combo[p] = value
            if table[tuple(combo)] != base:
                return False
        return True

    found = []
    for size in range(n + 1):
        for positions in combinations(range(n), size):
            pos_set = set(positions)
            if any(prior <= pos_set for prior in found):
                continue
            if is_reason(pos_set):
                found.append(frozenset(pos_set))
    return {frozenset(names[p] for p in reason) for reason in found}


def brute_necessary(model, entity, feature, budget=DEFAULT_BUDGET):
    reasons = enumerate_sufficient_reasons(model, entity, budget)
    return all(feature in reason for reason in reasons)


def brute_relevant(model, entity, feature, budget=DEFAULT_BUDGET):
    reasons = enumerate_sufficient_reasons(model, entity, budget)
    return any(feature in reason for reason in reasons)


def brute_useful(model, feature, budget=DEFAULT_BUDGET):
    """Direct search for an entity and value whose flip changes the class."""
    space = model.space
    pos = space.position(feature)
    grid = _representative_grid(model, budget)
    table = _prediction_table(model, grid)
    for combo, label in table.items():
        for value in grid[pos]:
            if value == combo[pos]:
                continue
            flipped = combo[:pos] + (value,) + combo[pos + 1 :]
            if table[flipped] != label:
                return True
    return False


def brute_score(model, feature, budget=DEFAULT_BUDGET):
    """Exhaustive count of entities for which `feature` is necessary."""
    space = model.space
    space.entity_count()  # raises NonCategoricalFeature on numeric spaces
    pos = space.position(feature)
    grid = _representative_grid(model, budget)
    table = _prediction_table(model, grid)
    count = 0
    for combo, label in table.items():
        for value in grid[pos]:
            if value == combo[pos]:
                continue
            flipped = combo[:pos] + (value,) + combo[pos + 1 :]
            if table[flipped] != label:
                count += 1
                break
    return count


def brute_equivalent(m1, m2, budget=DEFAULT_BUDGET):
    """Pointwise equality over a grid covering both models' thresholds."""
    from .errors import FeatureSpaceMismatch

    if m1.space != m2.space:
        raise FeatureSpaceMismatch("equivalence needs one shared feature space")
    space = m1.space
    grid = []
    total = 1
    for decl in space.features:
        if decl.is_categorical:
            values = list(decl.domain)
        else:
            pooled = set(m1.thresholds_for(decl.name))
            pooled.update(m2.thresholds_for(decl.name))
            values = cell_representatives(decl, sorted(pooled))
        grid.append(values)
        total *= len(values)
        if total > budget.max_entities:
            raise BudgetExceeded(
                f"representative grid exceeds {budget.max_entities} entities"
            )
    for combo in product(*grid):
        entity = Entity(space, dict(zip(space.names, combo)))
        if m1.evaluate(entity) != m2.evaluate(entity):
            return False
    return True


def enumerate_minimal_hitting_sets(h, budget=DEFAULT_BUDGET):
    """All inclusion-minimal hitting sets by subset enumeration."""
    nodes = h.nodes
    n = len(nodes)
    if 2**n > budget.max_subsets:
        raise BudgetExceeded(f"{2**n} subsets exceed {budget.max_subsets}")
    edges = [set(edge) for edge in h.edges]
    found = []
    for size in range(n + 1):
        for subset in combinations(nodes, size):
            members = frozenset(subset)
            if any(prior <= members for prior in found):
                continue
            if all(members & edge for edge in edges):
                found.append(members)
    return set(found)
