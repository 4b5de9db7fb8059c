"""Feature spaces and entities.

A feature space is an ordered list of feature declarations; features are
either categorical (finite domain, at least two values, declared order kept
for determinism) or numerical (an interval [m, M] with possibly infinite
bounds). An entity is a total assignment of in-domain values.

Categorical domains are additionally indexed by position so that value
sets can be handled as bitmasks in the hot paths.
"""

from dataclasses import dataclass, field

from .errors import (
    MissingFeature,
    OutOfDomainValue,
    ParseError,
    UnknownFeature,
)
from .values import INF, NEG_INF, exact, format_number

CATEGORICAL = "categorical"
NUMERICAL = "numerical"


def _normalize_cat_value(value):
    # categorical values are strings or exact numbers; 1 and "1" differ
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        raise ParseError("booleans are not valid categorical values; use 0/1")
    return exact(value)


@dataclass(frozen=True)
class FeatureDecl:
    name: str
    kind: str
    domain: tuple = ()          # categorical only, declared order
    lo: object = None           # numerical only
    hi: object = None

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ParseError(f"feature name must be a nonempty string, got {self.name!r}")
        if self.kind == CATEGORICAL:
            if len(self.domain) < 2:
                raise ParseError(f"categorical feature {self.name!r} needs >= 2 values")
            if len(set(self.domain)) != len(self.domain):
                raise ParseError(f"categorical feature {self.name!r} has duplicate values")
        elif self.kind == NUMERICAL:
            if not self.lo < self.hi:
                raise ParseError(
                    f"numerical feature {self.name!r} needs lo < hi, got "
                    f"[{format_number(self.lo)}, {format_number(self.hi)}]"
                )
        else:
            raise ParseError(f"unknown feature kind {self.kind!r}")

    @staticmethod
    def categorical(name, values):
        return FeatureDecl(name, CATEGORICAL, domain=tuple(_normalize_cat_value(v) for v in values))

    @staticmethod
    def numerical(name, lo=NEG_INF, hi=INF):
        from .values import parse_bound

        return FeatureDecl(name, NUMERICAL, lo=parse_bound(lo), hi=parse_bound(hi))

    @property
    def is_categorical(self):
        return self.kind == CATEGORICAL


@dataclass(frozen=True)
class FeatureSpace:
    features: tuple
    _index: dict = field(init=False, repr=False, compare=False)
    _value_index: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for pos, decl in enumerate(self.features):
            if decl.name in index:
                raise ParseError(f"duplicate feature name {decl.name!r}")
            index[decl.name] = pos
        object.__setattr__(self, "_index", index)
        object.__setattr__(
            self,
            "_value_index",
            tuple(
                {v: i for i, v in enumerate(d.domain)} if d.is_categorical else None
                for d in self.features
            ),
        )

    @staticmethod
    def of(*decls):
        return FeatureSpace(tuple(decls))

    def __len__(self):
        return len(self.features)

    def __contains__(self, name):
        return name in self._index

    @property
    def names(self):
        return tuple(d.name for d in self.features)

    def position(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownFeature(f"unknown feature {name!r}") from None

    def feature(self, name):
        return self.features[self.position(name)]

    def full_mask(self, pos):
        return (1 << len(self.features[pos].domain)) - 1

    def value_bit(self, pos, value):
        """Bit index of a categorical value; raises OutOfDomainValue."""
        vmap = self._value_index[pos]
        try:
            return vmap[_normalize_cat_value(value)]
        except KeyError:
            raise OutOfDomainValue(
                f"{value!r} is not in the domain of {self.features[pos].name!r}"
            ) from None

    def value_mask(self, pos, values):
        mask = 0
        for v in values:
            mask |= 1 << self.value_bit(pos, v)
        return mask

    def mask_values(self, pos, mask):
        """Values named by a categorical bitmask, in domain order."""
        domain = self.features[pos].domain
        return tuple(domain[i] for i in range(len(domain)) if (mask >> i) & 1)

    def is_all_categorical(self):
        return all(d.is_categorical for d in self.features)

    def entity_count(self):
        from .errors import NonCategoricalFeature

        total = 1
        for d in self.features:
            if not d.is_categorical:
                raise NonCategoricalFeature(
                    f"entity counting needs categorical features, {d.name!r} is numerical"
                )
            total *= len(d.domain)
        return total

    def entity(self, mapping):
        return Entity(self, mapping)


class Entity:
    """A total, validated assignment of features to in-domain values.

    Internally also keeps a positional tuple (`raw`) holding the domain
    index for categorical features and the exact value for numerical ones;
    every traversal works off that tuple.
    """

    __slots__ = ("space", "raw")

    def __init__(self, space, mapping, _raw=None):
        self.space = space
        if _raw is not None:
            self.raw = _raw
            return
        unknown = set(mapping) - set(space.names)
        if unknown:
            raise UnknownFeature(f"values given for unknown features {sorted(unknown)!r}")
        raw = []
        for pos, decl in enumerate(space.features):
            if decl.name not in mapping:
                raise MissingFeature(f"entity is missing feature {decl.name!r}")
            value = mapping[decl.name]
            if decl.is_categorical:
                raw.append(space.value_bit(pos, value))
            else:
                value = exact(value)
                if not (decl.lo <= value <= decl.hi):
                    raise OutOfDomainValue(
                        f"{decl.name!r} = {format_number(value)} outside "
                        f"[{format_number(decl.lo)}, {format_number(decl.hi)}]"
                    )
                raw.append(value)
        self.raw = tuple(raw)

    def value(self, name):
        pos = self.space.position(name)
        decl = self.space.features[pos]
        if decl.is_categorical:
            return decl.domain[self.raw[pos]]
        return self.raw[pos]

    def with_value(self, name, value):
        """The entity e_{x=b}: same assignment except feature `name` = value."""
        pos = self.space.position(name)
        decl = self.space.features[pos]
        if decl.is_categorical:
            slot = self.space.value_bit(pos, value)
        else:
            slot = exact(value)
            if not (decl.lo <= slot <= decl.hi):
                raise OutOfDomainValue(
                    f"{decl.name!r} = {format_number(slot)} outside "
                    f"[{format_number(decl.lo)}, {format_number(decl.hi)}]"
                )
        raw = list(self.raw)
        raw[pos] = slot
        return Entity(self.space, None, _raw=tuple(raw))

    def as_dict(self):
        return {d.name: self.value(d.name) for d in self.space.features}

    def __eq__(self, other):
        return (
            isinstance(other, Entity)
            and self.space == other.space
            and self.raw == other.raw
        )

    def __hash__(self):
        return hash(self.raw)

    def __repr__(self):
        inner = ", ".join(f"{k}: {format_number(v) if not isinstance(v, str) else v}"
                          for k, v in self.as_dict().items())
        return f"Entity({inner})"
