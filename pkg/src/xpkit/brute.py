"""
Exhaustive ground-truth oracle.

Everything here is computed by direct enumeration of feature space (or
of term space), deliberately sharing no code with the optimized
explainers: prediction is re-implemented per model kind, counting is
plain iteration.  A space guard bounds every loop; override it with the
XPKIT_SPACE_GUARD environment variable.
"""

import itertools
import os
from fractions import Fraction

from .errors import ContractError, ResourceLimitError
from .models import (DecisionList, DecisionSet, DecisionTree,
                     MonotonicClassifier, TabularClassifier, TreeLeaf)

DEFAULT_SPACE_GUARD = 2 ** 20


def space_guard():
    return int(os.environ.get('XPKIT_SPACE_GUARD', DEFAULT_SPACE_GUARD))


def check_guard(count, what='feature space'):
    limit = space_guard()
    if count > limit:
        raise ResourceLimitError(
            f'{what} of size {count} exceeds the space guard ({limit})')


#
#==============================================================================
def bf_predict(model, point):
    """Oracle-side prediction, independent of the model classes' own
       predict methods."""
    point = tuple(point)
    space = model.space
    if isinstance(model, DecisionTree):
        node = model.nodes[model.root]
        while not isinstance(node, TreeLeaf):
            v = point[space.features.index(node.feature)]
            for values, child in node.edges:
                if v in values:
                    node = model.nodes[child]
                    break
            else:
                raise ContractError('point not captured by any edge')
        return node.klass
    if isinstance(model, DecisionList):
        for rule in model.rules:
            if all(point[space.features.index(lit.feature)] in lit.values
                   for lit in rule.condition):
                return rule.klass
        raise ContractError('decision list fell through')
    if isinstance(model, DecisionSet):
        fired = []
        for klass, terms in model.class_terms.items():
            for term in terms:
                if all(point[space.features.index(lit.feature)] in lit.values
                       for lit in term):
                    fired.append(klass)
                    break
        if len(fired) != 1:
            raise ContractError(f'ill-formed decision set at {point}')
        return fired[0]
    if isinstance(model, (MonotonicClassifier, TabularClassifier)):
        return model.table[point]
    raise ContractError(f'unsupported model kind {type(model).__name__}')


def _points(space):
    return itertools.product(*(space.domains[i] for i in space.features))


def _hamming(a, b):
    return sum(1 for x, y in zip(a, b) if x != y)


def _allowed(space, point, v, constraint, epsilon):
    if constraint is not None and not constraint.allows(space, point):
        return False
    if epsilon is not None and _hamming(point, v) > epsilon:
        return False
    return True


#
#==============================================================================
def bf_predicate(model, instance, kind, feature_set, constraint=None,
                 epsilon=None):
    """
        Literal quantifier semantics of the weak predicates, checked over
        every point of feature space (filtered by the constraint set and
        the Hamming-distance locality bound when given).

        :param kind: 'axp' (fix feature_set) or 'cxp' (free feature_set)
    """
    space = model.space
    check_guard(space.num_points())
    feats = space.features
    v = tuple(instance.point)
    c = instance.klass
    fixed = (frozenset(feature_set) if kind == 'axp'
             else frozenset(feats) - frozenset(feature_set))
    for point in _points(space):
        if any(point[feats.index(i)] != v[feats.index(i)] for i in fixed):
            continue
        if not _allowed(space, point, v, constraint, epsilon):
            continue
        if kind == 'axp':
            if bf_predict(model, point) != c:
                return False
        else:
            if bf_predict(model, point) != c:
                return True
    return kind == 'axp'


def bf_enumerate(model, instance, kind, constraint=None, epsilon=None):
    """
        The complete AXp (or CXp) collection by powerset scan plus
        minimality filtering.  Monotonicity of the weak predicates makes
        the increasing-size scan with superset skipping exact.
    """
    space = model.space
    feats = space.features
    check_guard(space.num_points())
    check_guard(2 ** len(feats), 'subset lattice')
    v = tuple(instance.point)
    c = instance.klass

    # class of every point, computed once
    table = {}
    for point in _points(space):
        if _allowed(space, point, v, constraint, epsilon):
            table[point] = bf_predict(model, point)

    def weak(feature_set):
        fixed = (frozenset(feature_set) if kind == 'axp'
                 else frozenset(feats) - frozenset(feature_set))
        fixed_pos = [feats.index(i) for i in fixed]
        hit_contrast = False
        for point, klass in table.items():
            if any(point[p] != v[p] for p in fixed_pos):
                continue
            if klass != c:
                hit_contrast = True
                break
        return not hit_contrast if kind == 'axp' else hit_contrast

    found = []
    for size in range(len(feats) + 1):
        for combo in itertools.combinations(feats, size):
            cand = frozenset(combo)
            if any(prev <= cand for prev in found):
                continue
            if weak(cand):
                found.append(cand)
    return found


#
#==============================================================================
def bf_global(model, target_class):
    """
        Global explanations for a class: all subset-minimal literal terms
        (x_i = u_i) entailing the class, and all subset-minimal terms
        entailing any other class (the counterexamples).  Pure term-space
        scan.
    """
    space = model.space
    feats = space.features
    check_guard(space.num_points())
    terms_count = 1
    for i in feats:
        terms_count *= 1 + len(space.domains[i])
    check_guard(terms_count, 'term space')

    table = {point: bf_predict(model, point) for point in _points(space)}

    def entails(term, want_target):
        positions = {feats.index(f): u for f, u in term}
        for point, klass in table.items():
            if all(point[p] == u for p, u in positions.items()):
                if (klass == target_class) != want_target:
                    return False
        return True

    def scan(want_target):
        found = []
        for size in range(len(feats) + 1):
            for subset in itertools.combinations(feats, size):
                for values in itertools.product(*(space.domains[i]
                                                  for i in subset)):
                    term = frozenset(zip(subset, values))
                    if any(prev <= term for prev in found):
                        continue
                    if entails(term, want_target):
                        found.append(term)
        return found

    return scan(True), scan(False)


def bf_conditional_probability(model, instance, feature_set):
    """
        Pr(kappa(x) = c | x_S = v_S) as an exact rational, by counting
        over the slice of feature space that agrees with the instance on
        the fixed features.
    """
    space = model.space
    feats = space.features
    check_guard(space.num_points())
    fixed_pos = [feats.index(i) for i in frozenset(feature_set)]
    v = tuple(instance.point)
    total = good = 0
    for point in _points(space):
        if any(point[p] != v[p] for p in fixed_pos):
            continue
        total += 1
        if bf_predict(model, point) == instance.klass:
            good += 1
    return Fraction(good, total)
