"""
Hitting set computation over collections of finite sets.

Used both for the decision-tree explainer (subset-minimal hitting sets
of inconsistency sets) and for the smallest-explanation search (minimum
cardinality hitting sets).
"""

import itertools

from .errors import ContractError, ResourceLimitError
from .sat import Solver, VarPool, at_most_k

ENUM_UNIVERSE_LIMIT = 20


class SetCollection:
    """A universe of element ids and a list of member subsets to hit."""

    def __init__(self, universe, sets):
        self.universe = frozenset(universe)
        self.sets = [frozenset(s) for s in sets]
        for s in self.sets:
            if not s <= self.universe:
                raise ContractError(f'member set {sorted(s)} not within universe')

    def pruned(self):
        """Deduplicate members and drop supersets of other members
           (sound: both leave the hitting sets unchanged)."""
        members = sorted(set(self.sets), key=lambda s: (len(s), sorted(s)))
        kept = []
        for s in members:
            if not any(t <= s for t in kept):
                kept.append(s)
        return kept

    def _check_hittable(self):
        for s in self.sets:
            if not s:
                raise ContractError('collection contains an empty set; unhittable')


def _hits_all(candidate, sets):
    return all(candidate & s for s in sets)


def minimal_hitting_set(collection, seed=None):
    """
        Shrink a seed (default: the whole universe) to a subset-minimal
        hitting set by one deletion pass, in polynomial time.
    """
    collection._check_hittable()
    sets = collection.pruned()
    if seed is None:
        seed = collection.universe
    seed = frozenset(seed)
    if not _hits_all(seed, sets):
        raise ContractError('seed does not hit every member set')
    result = set(seed)
    for e in sorted(seed):
        if _hits_all(result - {e}, sets):
            result.discard(e)
    return frozenset(result)


def minimum_hitting_set(collection):
    """
        Exact minimum-cardinality hitting set by branch and bound with a
        greedy upper bound.  Ties are broken towards the lexicographically
        smallest sorted element sequence.
    """
    collection._check_hittable()
    sets = collection.pruned()
    if not sets:
        return frozenset()
    best_size = len(_greedy_hitting_set(sets))
    best_size = _bnb_optimum(sets, best_size)
    # second pass: build the lexicographically smallest optimum
    chosen = []
    candidates = sorted(collection.universe)
    for e in candidates:
        if len(chosen) == best_size:
            break
        trial = chosen + [e]
        remaining = [c for c in candidates if c > e]
        if _completable(sets, trial, remaining, best_size):
            chosen = trial
    return frozenset(chosen)


def _greedy_hitting_set(sets):
    uncovered = list(sets)
    picked = set()
    while uncovered:
        counts = {}
        for s in uncovered:
            for e in s:
                counts[e] = counts.get(e, 0) + 1
        e = min(counts, key=lambda x: (-counts[x], x))
        picked.add(e)
        uncovered = [s for s in uncovered if e not in s]
    return picked


def _disjoint_lower_bound(sets):
    used = set()
    bound = 0
    for s in sorted(sets, key=lambda s: (len(s), sorted(s))):
        if not s & used:
            bound += 1
            used |= s
    return bound


def _bnb_optimum(sets, upper):
    """Smallest hitting set cardinality, at most `upper`."""
    best = upper

    def recurse(uncovered, size):
        nonlocal best
        if not uncovered:
            best = min(best, size)
            return
        if size + _disjoint_lower_bound(uncovered) >= best:
            return
        branch_set = min(uncovered, key=lambda s: (len(s), sorted(s)))
        for e in sorted(branch_set):
            recurse([s for s in uncovered if e not in s], size + 1)

    recurse(sets, 0)
    return best


def _completable(sets, prefix, remaining, budget):
    """Can `prefix` extend, using elements from `remaining` only, to a
       hitting set of cardinality exactly `budget`?"""
    pref = set(prefix)
    uncovered = [s for s in sets if not s & pref]
    slack = budget - len(prefix)
    if slack < 0:
        return False
    allowed = set(remaining)
    if any(not (s & allowed) for s in uncovered):
        return False
    found = False

    def recurse(uncov, left, pool):
        nonlocal found
        if found:
            return
        if not uncov:
            found = True
            return
        if left == 0 or left < _disjoint_lower_bound(uncov):
            return
        branch_set = min(uncov, key=lambda s: (len(s), sorted(s)))
        for e in sorted(branch_set & pool):
            recurse([s for s in uncov if e not in s], left - 1, pool - {e})

    recurse(uncovered, slack, allowed)
    return found


def minimum_hitting_set_sat(collection):
    """
        Independent route to one minimum-cardinality hitting set: a SAT
        formula with an at-most-k sequential counter, tightened until
        unsatisfiable.  Kept as a cross-check for the branch-and-bound.
    """
    collection._check_hittable()
    sets = collection.pruned()
    if not sets:
        return frozenset()
    elems = sorted(collection.universe)
    var_of = {e: i + 1 for i, e in enumerate(elems)}
    base = [tuple(var_of[e] for e in sorted(s)) for s in sets]
    best = None
    for k in range(1, len(elems) + 1):
        pool = VarPool(start_from=len(elems) + 1)
        slv = Solver()
        for cl in base:
            slv.add_clause(cl)
        for cl in at_most_k([var_of[e] for e in elems], k, pool):
            slv.add_clause(cl)
        if slv.solve():
            model = slv.get_model()
            best = frozenset(e for e in elems if model[var_of[e] - 1] > 0)
            break
    return best


def all_minimal_hitting_sets(collection):
    """
        Every subset-minimal hitting set, by an increasing-size scan of
        the universe's subsets.  Guarded: only desk-scale universes.
    """
    collection._check_hittable()
    if len(collection.universe) > ENUM_UNIVERSE_LIMIT:
        raise ResourceLimitError(
            f'universe of {len(collection.universe)} elements exceeds the '
            f'enumeration guard ({ENUM_UNIVERSE_LIMIT})')
    sets = collection.pruned()
    elems = sorted(collection.universe)
    found = []
    for size in range(0, len(elems) + 1):
        for combo in itertools.combinations(elems, size):
            cand = frozenset(combo)
            if any(prev <= cand for prev in found):
                continue
            if _hits_all(cand, sets):
                found.append(cand)
    return found
