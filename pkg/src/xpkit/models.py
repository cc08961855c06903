"""
Feature spaces, instances, and classifier representations.

Domains are finite: boolean or contiguous integer ranges (categorical
values are pre-mapped to integers at ingestion).  All models are
immutable after construction and safe to share across threads.
"""

import math
from dataclasses import dataclass, field

from .errors import ContractError, DomainError, ModelError

#
#==============================================================================
@dataclass(frozen=True)
class FeatureSpace:
    """
        The set of features 1..m with their finite domains, plus the
        class set.
    """
    features: tuple
    domains: dict               # feature id -> tuple of admissible values
    classes: tuple

    def __post_init__(self):
        if len(self.features) < 1:
            raise ModelError('a feature space needs at least one feature')
        if tuple(sorted(self.features)) != self.features:
            raise ModelError('feature ids must be listed in ascending order')
        if len(set(self.features)) != len(self.features):
            raise ModelError('duplicate feature ids')
        for i in self.features:
            dom = self.domains.get(i)
            if not dom:
                raise ModelError(f'feature {i} has an empty or missing domain')
            if tuple(sorted(set(dom))) != tuple(dom):
                raise ModelError(f'domain of feature {i} must be strictly increasing')
        if len(set(self.classes)) < 2:
            raise ModelError('at least two classes required')
        if len(set(self.classes)) != len(self.classes):
            raise ModelError('duplicate classes')

    def domain(self, i):
        return self.domains[i]

    def num_points(self):
        return math.prod(len(self.domains[i]) for i in self.features)

    def check_point(self, point):
        if len(point) != len(self.features):
            raise DomainError(f'point has {len(point)} coordinates, '
                              f'expected {len(self.features)}')
        for i, v in zip(self.features, point):
            if v not in self.domains[i]:
                raise DomainError(f'value {v!r} outside the domain of feature {i}')
        return tuple(point)

    def value_of(self, point, i):
        return point[self.features.index(i)]


@dataclass(frozen=True)
class Instance:
    """A point in feature space together with its predicted class."""
    point: tuple
    klass: object

    def bind(self, model):
        """Validate the instance against a model: in-domain point and
           matching prediction."""
        model.space.check_point(self.point)
        if self.klass not in model.space.classes:
            raise DomainError(f'unknown class {self.klass!r}')
        got = model.predict(self.point)
        if got != self.klass:
            raise ContractError(
                f'instance labelled {self.klass!r} but the model predicts {got!r}')
        return self


#
#==============================================================================
@dataclass(frozen=True)
class Literal:
    """A feature literal x_i in E_i (E_i a nonempty set of values)."""
    feature: int
    values: frozenset

    def holds(self, space, point):
        return space.value_of(point, self.feature) in self.values


def _term_holds(term, space, point):
    return all(lit.holds(space, point) for lit in term)


#
#==============================================================================
@dataclass(frozen=True)
class TreeLeaf:
    klass: object


@dataclass(frozen=True)
class TreeNode:
    feature: int
    edges: tuple                # of (frozenset of values, child id)


@dataclass(frozen=True)
class DecisionTree:
    space: FeatureSpace
    nodes: dict                 # node id -> TreeLeaf | TreeNode
    root: int

    def predict(self, point):
        node_id = self.root
        while True:
            node = self.nodes[node_id]
            if isinstance(node, TreeLeaf):
                return node.klass
            v = self.space.value_of(point, node.feature)
            nxt = [child for values, child in node.edges if v in values]
            if len(nxt) != 1:
                raise ModelError(
                    f'node {node_id}: edges do not partition the domain '
                    f'of feature {node.feature} (value {v!r})')
            node_id = nxt[0]

    def consistent_path(self, point):
        """The unique root-to-leaf node-id sequence consistent with point."""
        path = [self.root]
        while True:
            node = self.nodes[path[-1]]
            if isinstance(node, TreeLeaf):
                return tuple(path)
            v = self.space.value_of(point, node.feature)
            nxt = [child for values, child in node.edges if v in values]
            if len(nxt) != 1:
                raise ModelError(
                    f'node {path[-1]}: edges do not partition the domain '
                    f'of feature {node.feature} (value {v!r})')
            path.append(nxt[0])

    def paths(self):
        """All root-to-leaf paths, in depth-first edge-declaration order."""
        out = []

        def walk(node_id, prefix):
            node = self.nodes[node_id]
            if isinstance(node, TreeLeaf):
                out.append(tuple(prefix))
                return
            for _, child in node.edges:
                walk(child, prefix + [child])

        walk(self.root, [self.root])
        return out

    def path_class(self, path):
        return self.nodes[path[-1]].klass

    def path_literals(self, path):
        """Per-feature allowed value sets along a path; repeated tests of
           a feature intersect."""
        allowed = {}
        for pos in range(len(path) - 1):
            node = self.nodes[path[pos]]
            values = next(vals for vals, child in node.edges
                          if child == path[pos + 1])
            if node.feature in allowed:
                allowed[node.feature] = allowed[node.feature] & values
            else:
                allowed[node.feature] = frozenset(values)
        return allowed


@dataclass(frozen=True)
class DlRule:
    condition: tuple            # of Literal; empty = tautology
    klass: object


@dataclass(frozen=True)
class DecisionList:
    space: FeatureSpace
    rules: tuple                # of DlRule; the last one is the default

    def predict(self, point):
        for rule in self.rules:
            if _term_holds(rule.condition, self.space, point):
                return rule.klass
        raise ModelError('no rule fired; the default rule is missing')


@dataclass(frozen=True)
class DecisionSet:
    space: FeatureSpace
    class_terms: dict           # class -> tuple of terms (each a tuple of Literal)

    def firing_classes(self, point):
        return [c for c, terms in self.class_terms.items()
                if any(_term_holds(t, self.space, point) for t in terms)]

    def predict(self, point):
        fired = self.firing_classes(point)
        if len(fired) != 1:
            raise ModelError(
                f'decision set is ill-formed at {tuple(point)}: '
                f'{len(fired)} class DNFs fire')
        return fired[0]


@dataclass(frozen=True)
class MonotonicClassifier:
    """
        Classifier over ordered integer domains with a totally ordered
        class chain; the classification function is an explicit table
        (expression-form models are tabulated at ingestion).
    """
    space: FeatureSpace         # classes tuple doubles as the chain, ascending
    table: dict                 # point tuple -> class

    def predict(self, point):
        return self.table[tuple(point)]

    def rank(self, klass):
        return self.space.classes.index(klass)

    def lower_bounds(self):
        return tuple(self.space.domains[i][0] for i in self.space.features)

    def upper_bounds(self):
        return tuple(self.space.domains[i][-1] for i in self.space.features)


@dataclass(frozen=True)
class TabularClassifier:
    """An explicit mapping from every point of the feature space to a class."""
    space: FeatureSpace
    table: dict                 # point tuple -> class

    def predict(self, point):
        return self.table[tuple(point)]


#
#==============================================================================
@dataclass(frozen=True)
class FvLiteral:
    """Constraint literal: x_feature = value (or its negation)."""
    feature: int
    value: object
    negated: bool = False

    def holds(self, space, point):
        eq = space.value_of(point, self.feature) == self.value
        return not eq if self.negated else eq


@dataclass(frozen=True)
class Constraint:
    """A CNF over feature-value literals restricting the allowed points."""
    clauses: tuple              # of tuples of FvLiteral

    def allows(self, space, point):
        return all(any(lit.holds(space, point) for lit in cl)
                   for cl in self.clauses)


#
#==============================================================================
def iter_space(space):
    """Odometer enumeration of the feature space, feature-id order, last
       feature cycling fastest."""
    import itertools
    doms = [space.domains[i] for i in space.features]
    return itertools.product(*doms)


def predict(model, point):
    """Classify a point, checking it lies in the model's feature space."""
    model.space.check_point(point)
    return model.predict(point)


def consistent_path(dt, point):
    dt.space.check_point(point)
    return dt.consistent_path(point)


#
#==============================================================================
@dataclass
class ValidationReport:
    ok: bool = True
    violations: list = field(default_factory=list)

    def add(self, message):
        self.ok = False
        self.violations.append(message)


def validate_model(model):
    """
        Check all structural invariants of a model; violations are
        returned as data, never raised.
    """
    report = ValidationReport()
    if isinstance(model, DecisionTree):
        _validate_dt(model, report)
    elif isinstance(model, DecisionList):
        _validate_dl(model, report)
    elif isinstance(model, DecisionSet):
        _validate_ds(model, report)
    elif isinstance(model, MonotonicClassifier):
        _validate_table(model, report)
        if report.ok:
            _validate_monotone(model, report)
    elif isinstance(model, TabularClassifier):
        _validate_table(model, report)
    else:
        report.add(f'unknown model kind {type(model).__name__}')
    return report


def _validate_dt(dt, report):
    space = dt.space
    if dt.root not in dt.nodes:
        report.add(f'root node {dt.root} undeclared')
        return
    seen = set()
    stack = [dt.root]
    while stack:
        node_id = stack.pop()
        if node_id in seen:
            report.add(f'node {node_id} reached twice (not a tree)')
            return
        seen.add(node_id)
        node = dt.nodes[node_id]
        if isinstance(node, TreeLeaf):
            if node.klass not in space.classes:
                report.add(f'leaf {node_id} predicts unknown class {node.klass!r}')
            continue
        if node.feature not in space.features:
            report.add(f'node {node_id} tests unknown feature {node.feature}')
            continue
        if len(node.edges) < 2:
            report.add(f'node {node_id} has fewer than two outgoing edges')
        domain = set(space.domains[node.feature])
        covered = []
        for values, child in node.edges:
            if not values:
                report.add(f'node {node_id} has an edge with an empty value set')
            if not values <= domain:
                report.add(f'node {node_id}: edge values {sorted(values)} '
                           f'outside the domain of feature {node.feature}')
            covered.extend(values)
            if child not in dt.nodes:
                report.add(f'node {node_id} points to undeclared node {child}')
            else:
                stack.append(child)
        if len(covered) != len(set(covered)):
            report.add(f'node {node_id}: edges not disjoint')
        if set(covered) != domain:
            report.add(f'node {node_id}: edges not exhaustive')
    unreachable = set(dt.nodes) - seen
    if unreachable:
        report.add(f'unreachable nodes {sorted(unreachable)}')
    if not report.ok:
        return
    # every path must be consistent (reachable by some point); repeated
    # tests of a feature intersect their edge sets
    for path in dt.paths():
        literals = dt.path_literals(path)
        if any(not values for values in literals.values()):
            report.add(f'path {path} is inconsistent (no point reaches '
                       f'leaf {path[-1]})')


def _validate_literals(space, term, where, report):
    for lit in term:
        if lit.feature not in space.features:
            report.add(f'{where} tests unknown feature {lit.feature}')
        elif not lit.values <= set(space.domains[lit.feature]):
            report.add(f'{where}: values {sorted(lit.values)} outside the '
                       f'domain of feature {lit.feature}')
        if not lit.values:
            report.add(f'{where}: empty value set')


def _validate_dl(dl, report):
    if not dl.rules:
        report.add('decision list has no rules')
        return
    if dl.rules[-1].condition:
        report.add('last rule is not a default (its condition is nonempty)')
    for j, rule in enumerate(dl.rules):
        if not rule.condition and j != len(dl.rules) - 1:
            report.add(f'rule {j + 1} has an empty condition but is not last')
        if rule.klass not in dl.space.classes:
            report.add(f'rule {j + 1} predicts unknown class {rule.klass!r}')
        _validate_literals(dl.space, rule.condition, f'rule {j + 1}', report)


def _validate_ds(ds, report):
    for klass, terms in ds.class_terms.items():
        if klass not in ds.space.classes:
            report.add(f'decision set predicts unknown class {klass!r}')
        for t, term in enumerate(terms):
            _validate_literals(ds.space, term, f'class {klass!r} term {t + 1}',
                               report)


def _validate_table(model, report):
    space = model.space
    points = set(iter_space(space))
    extra = set(model.table) - points
    missing = points - set(model.table)
    if extra:
        report.add(f'{len(extra)} table entries outside the feature space')
    if missing:
        report.add(f'table not total: {len(missing)} points missing')
        return
    values = set(model.table.values())
    if not values <= set(space.classes):
        report.add(f'table maps to unknown classes {sorted(map(repr, values - set(space.classes)))}')
    if len(values) < 2:
        report.add('classification function is constant')


def _validate_monotone(model, report):
    """Exhaustive check over immediate domain successors (sufficient by
       transitivity of the product order)."""
    space = model.space
    succ = {i: {v: space.domains[i][k + 1]
                for k, v in enumerate(space.domains[i][:-1])}
            for i in space.features}
    for point in iter_space(space):
        base = model.rank(model.table[point])
        for pos, i in enumerate(space.features):
            nxt = succ[i].get(point[pos])
            if nxt is None:
                continue
            bumped = point[:pos] + (nxt,) + point[pos + 1:]
            if model.rank(model.table[bumped]) < base:
                report.add(f'not monotone: {point} -> {bumped} lowers the class')
                return
