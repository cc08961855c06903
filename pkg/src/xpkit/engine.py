"""
The monotone-predicate explanation framework.

An ExplainContext bundles a model, an instance and an oracle backend
exposing the WeakAXp/WeakCXp predicates; on top of it sit the deletion
algorithm for one explanation, the hitting-set loop for one smallest
AXp, duality-driven enumeration of all explanations, and the feature
membership query.
"""

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import brute
from .encodings import encode_model, locality_clauses
from .errors import ContractError, ModelError
from .hitting import SetCollection, minimum_hitting_set
from .models import (DecisionList, DecisionSet, DecisionTree,
                     MonotonicClassifier, TabularClassifier, iter_space)
from .sat import CnfFormula, Solver
from .tractable import dt_inconsistency_sets, mono_weak_axp

BACKENDS = ('sat-encoding', 'brute-force', 'dt-native', 'monotone-native')


#
#==============================================================================
@dataclass(frozen=True)
class Explanation:
    kind: str                    # axp | cxp | weak-axp | weak-cxp | paxp
    features: frozenset
    probability: Optional[Fraction] = None

    def sorted_features(self):
        return sorted(self.features)


def explanation_to_json(expl, instance, space):
    values = dict(zip(space.features, instance.point))
    doc = {
        'kind': expl.kind,
        'features': expl.sorted_features(),
        'literals': [{'f': i, 'op': '=', 'v': values[i]}
                     for i in expl.sorted_features()],
    }
    if expl.probability is not None:
        doc['probability'] = f'{expl.probability.numerator}/{expl.probability.denominator}'
    return doc


def render_rule(expl, instance, space, klass=None, contrastive=False):
    """IF (x3=1) ∧ (x5=1) THEN 1 style rendering."""
    values = dict(zip(space.features, instance.point))
    lits = ' ∧ '.join(f'(x{i}={values[i]})' for i in expl.sorted_features())
    if not lits:
        lits = '(⊤)'
    klass = instance.klass if klass is None else klass
    if contrastive:
        return f'IF NOT [{lits}] THEN possibly not {klass}'
    return f'IF {lits} THEN {klass}'


#
#==============================================================================
@dataclass
class ExplainContext:
    """
        A local explanation problem: model, instance, oracle backend tag,
        optional constraint set and optional Hamming-locality radius.
    """
    model: object
    instance: object
    backend: str = 'auto'
    constraint: object = None
    epsilon: Optional[int] = None
    _oracle: object = field(default=None, repr=False)

    def __post_init__(self):
        self.instance = self.instance.bind(self.model)
        space = self.model.space
        if self.constraint is not None and \
                not self.constraint.allows(space, self.instance.point):
            raise ContractError('the instance point violates the constraint set')
        if self.epsilon is not None:
            if not 0 <= self.epsilon <= len(space.features):
                raise ContractError('locality radius must lie in [0, m]')
        if self.backend == 'auto':
            self.backend = self._pick_backend()
        if self.backend not in BACKENDS:
            raise ContractError(f'unknown backend {self.backend!r}')
        self._check_backend_fit()

    def _pick_backend(self):
        if isinstance(self.model, DecisionTree) and self.constraint is None:
            return 'dt-native'
        if isinstance(self.model, MonotonicClassifier) and \
                self.constraint is None and self.epsilon is None:
            return 'monotone-native'
        return 'sat-encoding'

    def _check_backend_fit(self):
        if self.backend == 'dt-native':
            if not isinstance(self.model, DecisionTree):
                raise ContractError('dt-native backend needs a decision tree')
            if self.constraint is not None:
                raise ContractError('dt-native backend does not support '
                                    'constraint sets')
        if self.backend == 'monotone-native':
            if not isinstance(self.model, MonotonicClassifier):
                raise ContractError('monotone-native backend needs a '
                                    'monotonic classifier')
            if self.constraint is not None or self.epsilon is not None:
                raise ContractError('monotone-native backend supports neither '
                                    'constraints nor locality')

    @property
    def features(self):
        return self.model.space.features

    def oracle(self):
        if self._oracle is None:
            self._oracle = _make_oracle(self)
        return self._oracle


def _make_oracle(ctx):
    if ctx.backend == 'sat-encoding':
        return _SatOracle(ctx)
    if ctx.backend == 'dt-native':
        return _DtNativeOracle(ctx)
    if ctx.backend == 'monotone-native':
        return _MonoOracle(ctx)
    return _BruteOracle(ctx)


class _SatOracle:
    """Weak predicates as consistency checks on the model's encoding."""

    def __init__(self, ctx):
        self.ctx = ctx
        enc = encode_model(ctx.model, ctx.instance, constraint=ctx.constraint)
        self.layer = enc.layer
        hard = enc.partition.hard.copy()
        if ctx.epsilon is not None:
            for cl in locality_clauses(self.layer, ctx.epsilon):
                hard.add_clause(cl)
            hard.num_vars = max(hard.num_vars, self.layer.pool.top)
        self.solver = Solver(hard)

    def _lits(self, feature_set):
        return [self.layer.soft_lits[i] for i in sorted(feature_set)]

    def weak_axp(self, s):
        return not self.solver.solve(assumptions=self._lits(s))

    def weak_cxp(self, s):
        fixed = frozenset(self.ctx.features) - frozenset(s)
        return self.solver.solve(assumptions=self._lits(fixed))

    def counterexample(self, s):
        if self.solver.solve(assumptions=self._lits(s)):
            return self.layer.decode_point(self.solver.get_model())
        return None


class _DtNativeOracle:
    """Set checks over the contrast paths' inconsistency sets; the
       locality radius filters paths farther than epsilon from v."""

    def __init__(self, ctx):
        self.ctx = ctx
        pairs = dt_inconsistency_sets(ctx.model, ctx.instance)
        if ctx.epsilon is not None:
            pairs = [(p, s) for p, s in pairs if len(s) <= ctx.epsilon]
        self.pairs = pairs

    def weak_axp(self, s):
        s = frozenset(s)
        return all(inc & s for _, inc in self.pairs)

    def weak_cxp(self, s):
        s = frozenset(s)
        return any(inc <= s for _, inc in self.pairs)

    def counterexample(self, s):
        s = frozenset(s)
        for path, inc in self.pairs:
            if inc & s:
                continue
            allowed = self.ctx.model.path_literals(path)
            point = []
            for pos, i in enumerate(self.ctx.features):
                v = self.ctx.instance.point[pos]
                if i in allowed and v not in allowed[i]:
                    point.append(min(allowed[i]))
                else:
                    point.append(v)
            return tuple(point)
        return None


class _MonoOracle:
    def __init__(self, ctx):
        self.ctx = ctx

    def weak_axp(self, s):
        return mono_weak_axp(self.ctx.model, self.ctx.instance, s)

    def weak_cxp(self, s):
        fixed = frozenset(self.ctx.features) - frozenset(s)
        return not mono_weak_axp(self.ctx.model, self.ctx.instance, fixed)

    def counterexample(self, s):
        model, inst = self.ctx.model, self.ctx.instance
        fixed = frozenset(s)
        low, high = [], []
        for pos, i in enumerate(self.ctx.features):
            if i in fixed:
                low.append(inst.point[pos])
                high.append(inst.point[pos])
            else:
                low.append(model.space.domains[i][0])
                high.append(model.space.domains[i][-1])
        for probe in (tuple(low), tuple(high)):
            if model.predict(probe) != inst.klass:
                return probe
        return None


class _BruteOracle:
    def __init__(self, ctx):
        self.ctx = ctx

    def weak_axp(self, s):
        return brute.bf_predicate(self.ctx.model, self.ctx.instance, 'axp', s,
                                  constraint=self.ctx.constraint,
                                  epsilon=self.ctx.epsilon)

    def weak_cxp(self, s):
        return brute.bf_predicate(self.ctx.model, self.ctx.instance, 'cxp', s,
                                  constraint=self.ctx.constraint,
                                  epsilon=self.ctx.epsilon)

    def counterexample(self, s):
        ctx = self.ctx
        space = ctx.model.space
        fixed_pos = [space.features.index(i) for i in frozenset(s)]
        v = tuple(ctx.instance.point)
        for point in iter_space(space):
            if any(point[p] != v[p] for p in fixed_pos):
                continue
            if ctx.constraint is not None and \
                    not ctx.constraint.allows(space, point):
                continue
            if ctx.epsilon is not None and \
                    sum(1 for a, b in zip(point, v) if a != b) > ctx.epsilon:
                continue
            if brute.bf_predict(ctx.model, point) != ctx.instance.klass:
                return tuple(point)
        return None


#
#==============================================================================
def weak_axp(ctx, feature_set):
    """Does fixing feature_set to the instance values force the class?"""
    _check_subset(ctx, feature_set)
    return ctx.oracle().weak_axp(frozenset(feature_set))


def weak_cxp(ctx, feature_set):
    """Does freeing feature_set admit a point with a different class?"""
    _check_subset(ctx, feature_set)
    return ctx.oracle().weak_cxp(frozenset(feature_set))


def _check_subset(ctx, feature_set):
    unknown = frozenset(feature_set) - frozenset(ctx.features)
    if unknown:
        raise ContractError(f'unknown features {sorted(unknown)}')


def _deletion(pred, seed, order):
    current = set(seed)
    steps = []
    for i in order:
        trial = frozenset(current - {i})
        value = pred(trial)
        steps.append((i, value, 'drop' if value else 'keep'))
        if value:
            current = set(trial)
    return frozenset(current), steps


def _resolve_order(ctx, seed, order, descending=False):
    if order is None:
        return sorted(seed, reverse=descending)
    order = [i for i in order if i in seed]
    if sorted(order) != sorted(seed):
        raise ContractError('order must cover the seed exactly once')
    return order


def find_one_xp(ctx, kind, seed=None, order=None):
    """
        One subset-minimal explanation by the deletion pass: drop a
        feature whenever the weak predicate still holds without it.

        :param kind: 'axp' or 'cxp'
        :param seed: starting feature set (default: all features); must
            itself satisfy the weak predicate
        :param order: traversal permutation (default ascending ids)
    """
    expl, _ = find_one_xp_with_trace(ctx, kind, seed=seed, order=order)
    return expl


def find_one_xp_with_trace(ctx, kind, seed=None, order=None):
    if kind not in ('axp', 'cxp'):
        raise ContractError("kind must be 'axp' or 'cxp'")
    oracle = ctx.oracle()
    pred = oracle.weak_axp if kind == 'axp' else oracle.weak_cxp
    seed = frozenset(ctx.features) if seed is None else frozenset(seed)
    _check_subset(ctx, seed)
    if not pred(seed):
        raise ContractError(f'seed {sorted(seed)} is not a weak '
                            f'{kind.upper()[:-1]}p')
    order = _resolve_order(ctx, seed, order)
    result, steps = _deletion(pred, seed, order)
    return Explanation(kind, result), steps


#
#==============================================================================
def smallest_axp(ctx):
    """
        One smallest AXp by implicit hitting sets: pick a minimum hitting
        set of the counterexample-derived sets collected so far; if it is
        a weak AXp it is the answer, otherwise the counterexample's
        changed features form a new set to hit.
    """
    oracle = ctx.oracle()
    feats = frozenset(ctx.features)
    v = tuple(ctx.instance.point)
    to_hit = []
    while True:
        candidate = minimum_hitting_set(SetCollection(feats, to_hit))
        if oracle.weak_axp(candidate):
            if not candidate:
                warnings.warn('the prediction is invariant over the allowed '
                              'points: the empty AXp explains it')
            return Explanation('axp', candidate)
        witness = oracle.counterexample(candidate)
        if witness is None:
            raise ContractError('oracle failed to produce a counterexample')
        changed = frozenset(i for pos, i in enumerate(ctx.features)
                            if witness[pos] != v[pos])
        if not changed or changed in to_hit:
            raise ContractError('counterexample makes no progress; '
                                'inconsistent oracle answers')
        to_hit.append(changed)


#
#==============================================================================
@dataclass(frozen=True)
class EnumerationStep:
    iteration: int
    picked_universal: tuple        # the u vector, one bool per feature
    fixed: frozenset
    weak_cxp_value: bool
    explanation: Explanation
    clause: tuple                  # (feature, polarity) literals added


def enumerate_xps(ctx, limit=None, prefer_free=True):
    """
        Complete, duplicate-free enumeration of all AXp's and CXp's by
        hitting-set duality: a picker formula over one universality
        variable per feature proposes candidate splits; each CXp blocks
        its variables negatively, each AXp positively; termination when
        the picker is unsatisfiable.
    """
    for step in enumerate_xps_with_trace(ctx, limit=limit,
                                         prefer_free=prefer_free):
        yield step.explanation


def enumerate_xps_with_trace(ctx, limit=None, prefer_free=True):
    feats = list(ctx.features)
    m = len(feats)
    oracle = ctx.oracle()
    picker = Solver(var_order=list(range(m, 0, -1)), polarity=prefer_free)
    picker._grow(m)
    emitted = 0
    iteration = 0
    while picker.solve():
        if limit is not None and emitted >= limit:
            return
        iteration += 1
        model = picker.get_model()
        universal = tuple(model[k] > 0 for k in range(m))
        fixed = frozenset(feats[k] for k in range(m) if not universal[k])
        free = frozenset(feats) - fixed
        has_cxp = oracle.weak_cxp(free)
        if has_cxp:
            result, _ = _deletion(oracle.weak_cxp, free,
                                  sorted(free, reverse=True))
            expl = Explanation('cxp', result)
            clause = tuple((i, False) for i in sorted(result))
            picker.add_clause([-(feats.index(i) + 1) for i in sorted(result)])
        else:
            result, _ = _deletion(oracle.weak_axp, fixed,
                                  sorted(fixed, reverse=True))
            expl = Explanation('axp', result)
            clause = tuple((i, True) for i in sorted(result))
            picker.add_clause([feats.index(i) + 1 for i in sorted(result)])
        emitted += 1
        yield EnumerationStep(iteration, universal, fixed, has_cxp, expl,
                              clause)


#
#==============================================================================
def feature_membership(ctx, target):
    """
        Is the target feature part of some explanation of the instance?
        Membership in some AXp and in some CXp coincide, so a witness of
        either kind settles the query.  Decision trees answer from the
        polynomial all-CXp list; other backends enumerate until a witness
        appears or the space is exhausted.
    """
    if target not in ctx.features:
        raise ContractError(f'unknown feature {target}')
    if ctx.backend == 'dt-native':
        from .tractable import dt_all_cxps
        cxps = dt_all_cxps(ctx.model, ctx.instance)
        if ctx.epsilon is not None:
            cxps = [s for s in cxps if len(s) <= ctx.epsilon]
        for s in cxps:
            if target in s:
                return True, Explanation('cxp', s)
        return False, None
    for expl in enumerate_xps(ctx):
        if target in expl.features:
            return True, expl
    return False, None


#
#==============================================================================
def global_axps_and_counterexamples(model, target_class):
    """
        Global explanations of a class: all subset-minimal literal terms
        entailing it, plus all minimal terms entailing its complement
        (the counterexamples).  Desk-scale term scan.
    """
    if target_class not in model.space.classes:
        raise ContractError(f'unknown class {target_class!r}')
    space = model.space
    feats = space.features
    brute.check_guard(space.num_points())
    table = {point: model.predict(point) for point in iter_space(space)}

    def minimal_terms(want_target):
        found = []
        for size in range(len(feats) + 1):
            for subset in itertools.combinations(feats, size):
                positions = [feats.index(f) for f in subset]
                for values in itertools.product(*(space.domains[f]
                                                  for f in subset)):
                    term = frozenset(zip(subset, values))
                    if any(prev <= term for prev in found):
                        continue
                    ok = True
                    for point, klass in table.items():
                        if all(point[p] == u for p, u in zip(positions, values)):
                            if (klass == target_class) != want_target:
                                ok = False
                                break
                    if ok:
                        found.append(term)
        return found

    return minimal_terms(True), minimal_terms(False)
