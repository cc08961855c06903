"""
Exact probabilistic explanations for decision trees under the uniform
distribution.

Per-path model counts come from the per-feature case rules (fixed
features contribute 0 or 1, universal ones the size of the allowed
value set), all in arbitrary-precision integers; probabilities are
exact rationals, so threshold comparisons carry no rounding error.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError

#
#==============================================================================
@dataclass(frozen=True)
class PathCount:
    path: tuple
    leaf: int
    klass: object
    count: int


@dataclass
class PathCountQuery:
    """Per-path model counts for one (tree, instance, fixed-set) triple."""
    dt: object
    instance: object
    fixed: frozenset

    def __post_init__(self):
        self.fixed = frozenset(self.fixed)
        unknown = self.fixed - set(self.dt.space.features)
        if unknown:
            raise ContractError(f'unknown features in fixed set: {sorted(unknown)}')

    def count(self, path):
        """Number of points consistent with the path that agree with the
           instance on every fixed feature."""
        space = self.dt.space
        values = dict(zip(space.features, self.instance.point))
        allowed = self.dt.path_literals(path)
        total = 1
        for i in space.features:
            if i in self.fixed:
                if i in allowed:
                    n = 1 if values[i] in allowed[i] else 0
                else:
                    n = 1
            else:
                n = len(allowed[i]) if i in allowed else len(space.domains[i])
            total *= n
        return total

    def report(self):
        return [PathCount(path, path[-1], self.dt.path_class(path),
                          self.count(path))
                for path in self.dt.paths()]

    def totals(self):
        """(count for the instance's class, count over all paths)."""
        good = total = 0
        for entry in self.report():
            total += entry.count
            if entry.klass == self.instance.klass:
                good += entry.count
        return good, total


def path_count(query, path):
    return query.count(path)


def conditional_probability(dt, instance, fixed):
    """
        Pr(kappa(x) = c | x_fixed = v_fixed) as an exact rational.  The
        denominator is never zero: the instance's own path always counts
        at least one point.
    """
    good, total = PathCountQuery(dt, instance, frozenset(fixed)).totals()
    return Fraction(good, total)


def _as_fraction(delta):
    if isinstance(delta, float):
        raise ContractError('threshold must be an exact rational or a decimal '
                            'string, not a float')
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ContractError('threshold must lie in (0, 1]')
    return delta


def weak_paxp(dt, instance, fixed, delta):
    """True iff the conditional class-preservation probability clears the
       threshold (non-strict comparison, exact rationals)."""
    delta = _as_fraction(delta)
    return conditional_probability(dt, instance, fixed) >= delta


def locally_minimal_paxp(dt, instance, delta, order=None):
    """
        One deletion pass over the features: drop a feature whenever the
        probability still clears the threshold without it.  The result is
        locally minimal (no single feature can be removed); the predicate
        is not monotone, so no global minimality is claimed.

        :return: (feature set, its exact probability)
    """
    delta = _as_fraction(delta)
    feats = list(dt.space.features)
    if order is not None:
        order = list(order)
        if sorted(order) != sorted(feats):
            raise ContractError('order must be a permutation of the feature ids')
    else:
        order = feats
    current = set(feats)
    for i in order:
        if weak_paxp(dt, instance, current - {i}, delta):
            current.discard(i)
    return frozenset(current), conditional_probability(dt, instance, current)


def free_space_product(dt, fixed):
    """Product of the domain sizes of the non-fixed features; the path
       counts of any fixed-set query must sum to it."""
    space = dt.space
    return math.prod(len(space.domains[i]) for i in space.features
                     if i not in frozenset(fixed))
