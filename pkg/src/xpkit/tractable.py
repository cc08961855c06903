"""
Polynomial-time native explainers.

Decision trees: one AXp via a subset-minimal hitting set of the
contrast-path inconsistency sets, and the complete CXp collection as
their antichain.  Monotonic classifiers: one AXp/CXp by probing the
class at per-feature bound vectors, two predictions per feature.
"""

from dataclasses import dataclass

from .errors import ContractError, ModelError
from .hitting import SetCollection, minimal_hitting_set

#
#==============================================================================
def dt_inconsistency_sets(dt, instance):
    """
        For each path predicting a class other than the instance's, the
        set of features whose instance value is inconsistent with the
        path (repeated tests intersect their edge sets first).
    """
    values = dict(zip(dt.space.features, instance.point))
    out = []
    for path in dt.paths():
        if dt.path_class(path) == instance.klass:
            continue
        allowed = dt.path_literals(path)
        if any(not vals for vals in allowed.values()):
            continue            # dead path: unreachable by any point
        inconsistent = frozenset(i for i, vals in allowed.items()
                                 if values[i] not in vals)
        out.append((path, inconsistent))
    return out


def dt_one_axp(dt, instance):
    """One abductive explanation: a subset-minimal hitting set of the
       inconsistency sets.  Linear set construction plus polynomial MHS."""
    sets = [s for _, s in dt_inconsistency_sets(dt, instance)]
    if any(not s for s in sets):
        raise ContractError('a contrast path is consistent with the instance; '
                            'the instance class is wrong')
    collection = SetCollection(frozenset(dt.space.features), sets)
    return minimal_hitting_set(collection)


def dt_all_cxps(dt, instance):
    """
        Every contrastive explanation: the antichain of the inconsistency
        sets (supersets of other sets dropped), in polynomial time.
    """
    sets = {s for _, s in dt_inconsistency_sets(dt, instance)}
    if any(not s for s in sets):
        raise ContractError('a contrast path is consistent with the instance; '
                            'the instance class is wrong')
    antichain = [s for s in sets if not any(t < s for t in sets)]
    return sorted(antichain, key=lambda s: (len(s), sorted(s)))


#
#==============================================================================
@dataclass
class BoundVectors:
    """Lower/upper probe points for the monotonic algorithms: free
       features sit at their domain bounds, fixed ones at the instance
       value."""
    low: list
    high: list

    def free(self, pos, lo, hi):
        self.low[pos] = lo
        self.high[pos] = hi

    def fix(self, pos, value):
        self.low[pos] = value
        self.high[pos] = value


def _mono_probe(model, bounds):
    lo = model.predict(tuple(bounds.low))
    hi = model.predict(tuple(bounds.high))
    if model.rank(lo) > model.rank(hi):
        raise ModelError('classifier is not monotone: lower probe outranks '
                         'the upper probe')
    return lo, hi


def _resolve_order(space, order):
    if order is None:
        return list(space.features)
    order = list(order)
    if sorted(order) != sorted(space.features):
        raise ContractError('order must be a permutation of the feature ids')
    return order


def mono_one_axp(model, instance, order=None):
    """
        One AXp for a monotonic classifier: free each feature in turn
        (lower bound to domain minimum, upper to maximum); if the two
        probe classes split, re-fix it.  The features still fixed at the
        end form an AXp.  O(m) predictions.
    """
    feats = model.space.features
    order = _resolve_order(model.space, order)
    bounds = BoundVectors(list(instance.point), list(instance.point))
    lo, hi = _mono_probe(model, bounds)
    if not lo == hi == instance.klass:
        raise ContractError('instance class does not match the model')
    fixed = set(feats)
    for i in order:
        pos = feats.index(i)
        domain = model.space.domains[i]
        bounds.free(pos, domain[0], domain[-1])
        lo, hi = _mono_probe(model, bounds)
        if lo != hi:
            bounds.fix(pos, instance.point[pos])
        else:
            fixed.discard(i)
    return frozenset(fixed)


def mono_one_cxp(model, instance, order=None):
    """
        One CXp, the dual loop: start from all features free, try fixing
        each; keep free exactly those whose fixing removes the class
        split between the probes.
    """
    feats = model.space.features
    order = _resolve_order(model.space, order)
    bounds = BoundVectors(list(model.lower_bounds()), list(model.upper_bounds()))
    lo, hi = _mono_probe(model, bounds)
    if lo == hi:
        raise ContractError('no CXp exists: the prediction cannot change')
    free = set(feats)
    for i in order:
        pos = feats.index(i)
        bounds.fix(pos, instance.point[pos])
        lo, hi = _mono_probe(model, bounds)
        if lo == hi:
            domain = model.space.domains[i]
            bounds.free(pos, domain[0], domain[-1])
        else:
            free.discard(i)
    return frozenset(free)


def mono_weak_axp(model, instance, feature_set):
    """Bound-vector characterization of the weak-AXp predicate: with
       exactly feature_set fixed, both probes classify alike."""
    feats = model.space.features
    fixed = frozenset(feature_set)
    low, high = [], []
    for pos, i in enumerate(feats):
        if i in fixed:
            low.append(instance.point[pos])
            high.append(instance.point[pos])
        else:
            low.append(model.space.domains[i][0])
            high.append(model.space.domains[i][-1])
    lo, hi = _mono_probe(model, BoundVectors(low, high))
    return lo == hi
