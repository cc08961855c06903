"""
Propositional encodings of explanation problems.

Every encoding is a hard/soft partition over a shared feature-literal
layer: one soft unit per feature asserting "feature i keeps its instance
value".  MUSes of the partition map to abductive explanations and MCSes
to contrastive ones (the decision-tree Horn encoding swaps the two: its
soft units assert universality instead).
"""

import json
from dataclasses import dataclass, field

from .errors import ContractError, ModelError
from .inconsistency import SoftPartition
from .models import (DecisionList, DecisionSet, DecisionTree,
                     MonotonicClassifier, TabularClassifier, TreeLeaf,
                     iter_space)
from .sat import CnfFormula, VarPool, at_most_k

#
#==============================================================================
@dataclass
class FeatureLiteralLayer:
    """
        Propositional view of the feature values of one instance.

        Binary features reuse a single value variable with polarity;
        multi-valued features get a one-hot group with EqualsOne clauses.
        soft_lits[i] is the literal meaning "x_i = v_i".
    """
    space: object
    instance: object
    pool: VarPool
    clauses: list = field(default_factory=list)
    soft_lits: dict = field(default_factory=dict)
    value_vars: dict = field(default_factory=dict)   # (feature, value) -> var
    _membership_cache: dict = field(default_factory=dict)

    @classmethod
    def build(cls, space, instance, pool=None):
        layer = cls(space, instance, pool or VarPool())
        v = dict(zip(space.features, instance.point))
        for i in space.features:
            domain = space.domains[i]
            if len(domain) == 2:
                var = layer.pool.id(('x', i))
                layer.value_vars[(i, domain[1])] = var
                layer.value_vars[(i, domain[0])] = -var
                layer.soft_lits[i] = var if v[i] == domain[1] else -var
            else:
                group = []
                for u in domain:
                    var = layer.pool.id(('x', i, u))
                    layer.value_vars[(i, u)] = var
                    group.append(var)
                layer.clauses.append(tuple(group))
                for a in range(len(group)):
                    for b in range(a + 1, len(group)):
                        layer.clauses.append((-group[a], -group[b]))
                layer.soft_lits[i] = layer.value_vars[(i, v[i])]
        return layer

    def value_literal(self, feature, value):
        return self.value_vars[(feature, value)]

    def membership_literal(self, feature, values):
        """
            A literal equivalent to x_feature in values.  Single-value
            sets map to a value literal; larger sets on one-hot features
            get a shared auxiliary definition (emitted once).
        """
        domain = self.space.domains[feature]
        values = frozenset(values)
        if not values:
            raise ContractError('empty membership set')
        if values == frozenset(domain):
            return None              # tautological literal
        if len(domain) == 2:
            if len(values) == 1:
                return self.value_literal(feature, next(iter(values)))
            raise ContractError('non-trivial set on a binary feature')
        if len(values) == 1:
            return self.value_literal(feature, next(iter(values)))
        key = (feature, values)
        if key not in self._membership_cache:
            g = self.pool.id(('in', feature, tuple(sorted(values))))
            vvars = [self.value_literal(feature, u) for u in sorted(values)]
            self.clauses.append((-g,) + tuple(vvars))
            for var in vvars:
                self.clauses.append((-var, g))
            self._membership_cache[key] = g
        return self._membership_cache[key]

    def term_clauses(self, literals, out_var):
        """
            Clauses defining out_var <-> conjunction of feature literals
            (each literal a (feature, values) pair).
        """
        clauses = []
        members = []
        for feature, values in literals:
            m = self.membership_literal(feature, values)
            if m is not None:
                members.append(m)
        for m in members:
            clauses.append((-out_var, m))
        clauses.append((out_var,) + tuple(-m for m in members))
        return clauses

    def decode_point(self, model):
        """Map a SAT model back to a point in feature space."""
        assignment = {abs(l): l > 0 for l in model}

        def lit_true(lit):
            return assignment.get(abs(lit), False) == (lit > 0)

        point = []
        for i in self.space.features:
            chosen = [u for u in self.space.domains[i]
                      if lit_true(self.value_vars[(i, u)])]
            if len(chosen) != 1:
                raise ContractError(f'model selects {len(chosen)} values '
                                    f'for feature {i}')
            point.append(chosen[0])
        return tuple(point)


#
#==============================================================================
@dataclass
class Encoding:
    """A soft partition plus the layer that gives its soft units meaning."""
    partition: SoftPartition
    layer: FeatureLiteralLayer
    # 'fix' when soft units assert x_i = v_i (MUS = AXp, MCS = CXp);
    # 'free' when they assert universality (MUS = CXp, MCS = AXp)
    soft_meaning: str = 'fix'

    def features(self):
        return list(self.partition.labels)


def _check_instance(model, instance):
    got = model.predict(instance.point)
    if got != instance.klass:
        raise ContractError(f'instance labelled {instance.klass!r} but the '
                            f'model predicts {got!r}')


def _lits_of_term(term):
    return [(lit.feature, lit.values) for lit in term]


def encode_dl(dl, instance, constraint=None):
    """
        Hard/soft partition for a decision list: per-rule fire variables,
        flip variables for rules predicting a class other than the
        instance's, and the disjunction requiring some flip to fire.
    """
    _check_instance(dl, instance)
    layer = FeatureLiteralLayer.build(dl.space, instance)
    pool = layer.pool
    hard = list(layer.clauses)
    c = instance.klass

    fire = {}
    for j, rule in enumerate(dl.rules[:-1]):
        t = pool.id(('t', j + 1))
        fire[j] = t
        hard.extend(layer.term_clauses(_lits_of_term(rule.condition), t))

    flips = []
    for j, rule in enumerate(dl.rules):
        if rule.klass == c:
            continue
        is_default = j == len(dl.rules) - 1
        f = pool.id(('f', j + 1))
        body = ([] if is_default else [fire[j]])
        body += [-fire[k] for k in range(j)
                 if dl.rules[k].klass == c]
        for b in body:
            hard.append((-f, b))
        hard.append((f,) + tuple(-b for b in body))
        flips.append(f)
    if not flips:
        raise ContractError('decision list cannot change its prediction; '
                            'nothing to explain')
    hard.append(tuple(flips))
    if constraint is not None:
        hard.extend(inject_constraints(layer, constraint))
    partition = SoftPartition(
        CnfFormula(hard, num_vars=pool.top),
        [(layer.soft_lits[i],) for i in dl.space.features],
        labels=list(dl.space.features))
    return Encoding(partition, layer)


def check_ds_wellformed(ds):
    """
        Verdict on a decision set: for every point exactly one class DNF
        must fire.  Witness points for overlap and coverage gaps are the
        first found in odometer order.
    """
    overlap = gap = None
    for point in iter_space(ds.space):
        fired = ds.firing_classes(point)
        if len(fired) > 1 and overlap is None:
            overlap = tuple(point)
        if not fired and gap is None:
            gap = tuple(point)
        if overlap is not None and gap is not None:
            break
    return DsVerdict(overlap is None and gap is None, overlap, gap)


@dataclass(frozen=True)
class DsVerdict:
    ok: bool
    overlap: object = None
    gap: object = None


def encode_ds(ds, instance, constraint=None):
    """
        Partition for a well-formed decision set: per-term variables,
        per-class pick variables p_r, and the requirement p_s = 0 for the
        instance's class s.
    """
    verdict = check_ds_wellformed(ds)
    if not verdict.ok:
        raise ContractError(f'decision set ill-formed '
                            f'(overlap={verdict.overlap}, gap={verdict.gap})')
    if len(ds.class_terms) < 2:
        raise ContractError('decision set needs a contrast class')
    _check_instance(ds, instance)
    layer = FeatureLiteralLayer.build(ds.space, instance)
    pool = layer.pool
    hard = list(layer.clauses)
    picks = {}
    for klass, terms in ds.class_terms.items():
        tvars = []
        for j, term in enumerate(terms):
            t = pool.id(('t', klass, j + 1))
            tvars.append(t)
            hard.extend(layer.term_clauses(_lits_of_term(term), t))
        p = pool.id(('p', klass))
        picks[klass] = p
        for t in tvars:
            hard.append((-t, p))
        hard.append((-p,) + tuple(tvars))
    hard.append((-picks[instance.klass],))
    if constraint is not None:
        hard.extend(inject_constraints(layer, constraint))
    partition = SoftPartition(
        CnfFormula(hard, num_vars=pool.top),
        [(layer.soft_lits[i],) for i in ds.space.features],
        labels=list(ds.space.features))
    return Encoding(partition, layer)


#
#==============================================================================
@dataclass
class DtHornEncoding:
    """Horn partition for a decision tree; soft units assert universality."""
    partition: SoftPartition
    universal_vars: dict        # feature -> u_i variable
    blocked_vars: dict          # node id -> b_r variable
    clause_groups: dict         # rule tag ('B1'..'B5') -> clause count
    soft_meaning = 'free'       # MUSes are CXps, MCSes are AXps

    def features(self):
        return list(self.partition.labels)


def encode_dt_horn(dt, instance):
    """
        Linear-size Horn encoding of the one-AXp problem for a decision
        tree: blocked variables per node, universal variables per
        feature.  All hard clauses are Horn, so consistency checks run in
        linear time; MCSes of the partition are the AXps and MUSes the
        CXps.
    """
    _check_instance(dt, instance)
    c = instance.klass
    values = dict(zip(dt.space.features, instance.point))
    pool = VarPool()
    u = {i: pool.id(('u', i)) for i in dt.space.features}
    b = {r: pool.id(('b', r)) for r in sorted(dt.nodes)}
    hard = []
    groups = {'B1': 0, 'B2': 0, 'B3': 0, 'B4': 0, 'B5': 0}

    hard.append((b[dt.root],))
    groups['B1'] += 1
    contrast_leaves = 0
    for r in sorted(dt.nodes):
        node = dt.nodes[r]
        if isinstance(node, TreeLeaf):
            if node.klass == c:
                hard.append((b[r],))
                groups['B2'] += 1
            else:
                hard.append((-b[r],))
                groups['B3'] += 1
                contrast_leaves += 1
            continue
        for edge_values, child in node.edges:
            if values[node.feature] in edge_values:
                hard.append((-b[r], b[child]))
                groups['B4'] += 1
            else:
                hard.append((-b[r], -u[node.feature], b[child]))
                groups['B5'] += 1
    if not contrast_leaves:
        raise ContractError('constant tree: no contrast leaf to block')
    partition = SoftPartition(CnfFormula(hard, num_vars=pool.top),
                              [(u[i],) for i in dt.space.features],
                              labels=list(dt.space.features))
    return DtHornEncoding(partition, u, b, groups)


#
#==============================================================================
def encode_dt_contrast(dt, instance, constraint=None):
    """
        Generic (non-Horn) partition for a decision tree: each contrast
        path becomes a flip term over the literal layer.  Used by the
        sat-encoding backend, where constraints can be injected.
    """
    _check_instance(dt, instance)
    layer = FeatureLiteralLayer.build(dt.space, instance)
    pool = layer.pool
    hard = list(layer.clauses)
    flips = []
    for k, path in enumerate(dt.paths()):
        if dt.path_class(path) == instance.klass:
            continue
        literals = dt.path_literals(path)
        if any(not vals for vals in literals.values()):
            continue            # dead path
        f = pool.id(('f', k + 1))
        flips.append(f)
        hard.extend(layer.term_clauses(sorted(literals.items()), f))
    if not flips:
        raise ContractError('constant tree: prediction cannot change')
    hard.append(tuple(flips))
    if constraint is not None:
        hard.extend(inject_constraints(layer, constraint))
    partition = SoftPartition(
        CnfFormula(hard, num_vars=pool.top),
        [(layer.soft_lits[i],) for i in dt.space.features],
        labels=list(dt.space.features))
    return Encoding(partition, layer)


def encode_table_contrast(model, instance, constraint=None):
    """
        Partition for an explicit-table classifier: one flip term per
        contrast point of the feature space (desk scale only).
    """
    _check_instance(model, instance)
    layer = FeatureLiteralLayer.build(model.space, instance)
    pool = layer.pool
    hard = list(layer.clauses)
    feats = model.space.features
    flips = []
    for idx, point in enumerate(iter_space(model.space)):
        if model.table[point] == instance.klass:
            continue
        f = pool.id(('f', idx))
        flips.append(f)
        lits = [(i, frozenset({u})) for i, u in zip(feats, point)]
        hard.extend(layer.term_clauses(lits, f))
    if not flips:
        raise ContractError('constant classifier: prediction cannot change')
    hard.append(tuple(flips))
    if constraint is not None:
        hard.extend(inject_constraints(layer, constraint))
    partition = SoftPartition(
        CnfFormula(hard, num_vars=pool.top),
        [(layer.soft_lits[i],) for i in feats],
        labels=list(feats))
    return Encoding(partition, layer)


def encode_model(model, instance, constraint=None):
    """Dispatch to the fitting contrast encoding for the model kind."""
    if isinstance(model, DecisionList):
        return encode_dl(model, instance, constraint=constraint)
    if isinstance(model, DecisionSet):
        return encode_ds(model, instance, constraint=constraint)
    if isinstance(model, DecisionTree):
        return encode_dt_contrast(model, instance, constraint=constraint)
    if isinstance(model, (TabularClassifier, MonotonicClassifier)):
        return encode_table_contrast(model, instance, constraint=constraint)
    raise ModelError(f'no encoding for {type(model).__name__}')


#
#==============================================================================
def inject_constraints(layer, constraint):
    """
        Translate a feature-value constraint CNF onto the layer's value
        variables.  The instance point itself must satisfy the
        constraint.
    """
    if not constraint.allows(layer.space, layer.instance.point):
        raise ContractError('the instance point violates the constraint set')
    clauses = []
    for cl in constraint.clauses:
        out = []
        for lit in cl:
            var = layer.value_literal(lit.feature, lit.value)
            out.append(-var if lit.negated else var)
        clauses.append(tuple(out))
    return clauses


def locality_clauses(layer, epsilon):
    """
        Cardinality layer bounding the Hamming distance to the instance:
        at most epsilon of the "feature changed" indicators may hold.
    """
    changed = [-layer.soft_lits[i] for i in layer.space.features]
    return at_most_k(changed, epsilon, layer.pool)


#
#==============================================================================
def encoding_to_dimacs(encoding):
    """DIMACS text plus sidecar JSON (selector and value-variable maps)."""
    from .inconsistency import partition_to_dimacs
    dimacs, sidecar = partition_to_dimacs(encoding.partition)
    data = json.loads(sidecar)
    layer = getattr(encoding, 'layer', None)
    if layer is not None:
        data['value_vars'] = {
            str(abs(var)): {'feature': feat, 'value': value,
                            'negated': var < 0}
            for (feat, value), var in sorted(layer.value_vars.items(),
                                             key=lambda kv: (kv[0][0], str(kv[0][1])))}
    data['soft_meaning'] = getattr(encoding, 'soft_meaning', 'fix')
    return dimacs, json.dumps(data, indent=2, sort_keys=True)
