"""Shared brute-force oracles and generators used by the test suite."""

import itertools
import random


def eval_clause(clause, assignment):
    return any((l > 0) == assignment[abs(l)] for l in clause)


def cnf_satisfiable(clauses, num_vars):
    """Truth-table satisfiability check, independent of the solver."""
    for bits in itertools.product([False, True], repeat=num_vars):
        assignment = {v: bits[v - 1] for v in range(1, num_vars + 1)}
        if all(eval_clause(cl, assignment) for cl in clauses):
            return True
    return False


def cnf_models(clauses, num_vars):
    models = []
    for bits in itertools.product([False, True], repeat=num_vars):
        assignment = {v: bits[v - 1] for v in range(1, num_vars + 1)}
        if all(eval_clause(cl, assignment) for cl in clauses):
            models.append(assignment)
    return models


def random_cnf(rng, num_vars, num_clauses, width=3):
    clauses = []
    for _ in range(num_clauses):
        size = rng.randint(1, width)
        variables = rng.sample(range(1, num_vars + 1), min(size, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return clauses


def hits_all(candidate, sets):
    return all(candidate & s for s in sets)


def brute_minimal_hitting_sets(universe, sets):
    """All subset-minimal hitting sets, by increasing-size powerset scan."""
    universe = sorted(universe)
    found = []
    for size in range(0, len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            cand = frozenset(combo)
            if any(prev <= cand for prev in found):
                continue
            if hits_all(cand, sets):
                found.append(cand)
    return found


def brute_minimum_hitting_sets(universe, sets):
    """All hitting sets of globally minimum cardinality."""
    mhs = brute_minimal_hitting_sets(universe, sets)
    if not mhs:
        return []
    best = min(len(h) for h in mhs)
    return [h for h in mhs if len(h) == best]


def make_rng(seed):
    return random.Random(seed)


#
# -- random desk-scale models -------------------------------------------------

from xpkit.models import (DecisionList, DecisionSet, DecisionTree, DlRule,
                          FeatureSpace, Instance, Literal, TabularClassifier,
                          TreeLeaf, TreeNode, iter_space)


def random_space(rng, max_features=5, max_domain=4, classes=(0, 1)):
    m = rng.randint(2, max_features)
    domains = {}
    for i in range(1, m + 1):
        size = rng.randint(2, max_domain)
        domains[i] = tuple(range(size))
    return FeatureSpace(tuple(range(1, m + 1)), domains, tuple(classes))


def random_tree(rng, max_features=5, max_domain=3, max_depth=4):
    """A structurally valid tree: edges partition the domain at each
       node and repeated tests stay within the values still allowed, so
       every path is consistent."""
    space = random_space(rng, max_features, max_domain)

    counter = [0]

    def fresh():
        counter[0] += 1
        return counter[0]

    nodes = {}

    def build(depth, remaining):
        node_id = fresh()
        splittable = [f for f in space.features if len(remaining[f]) >= 2]
        if depth >= max_depth or not splittable or rng.random() < 0.3:
            nodes[node_id] = TreeLeaf(rng.choice(space.classes))
            return node_id
        feature = rng.choice(splittable)
        values = sorted(remaining[feature])
        rng.shuffle(values)
        parts = rng.randint(2, len(values))
        cuts = sorted(rng.sample(range(1, len(values)), parts - 1))
        groups, prev = [], 0
        for cut in cuts + [len(values)]:
            groups.append(set(values[prev:cut]))
            prev = cut
        # each node must partition the full domain: values no longer
        # reachable are spread over the groups (the paths stay consistent
        # because every group overlaps the remaining set)
        for v in set(space.domains[feature]) - set(values):
            groups[rng.randrange(len(groups))].add(v)
        edges = []
        for grp in groups:
            child_remaining = dict(remaining)
            child_remaining[feature] = frozenset(grp) & remaining[feature]
            edges.append((frozenset(grp), build(depth + 1, child_remaining)))
        nodes[node_id] = TreeNode(feature, edges=tuple(edges))
        return node_id

    root = build(0, {f: frozenset(space.domains[f]) for f in space.features})
    return DecisionTree(space, nodes, root)


def random_term(rng, space, max_literals=2):
    feats = rng.sample(space.features, rng.randint(1, min(max_literals,
                                                          len(space.features))))
    term = []
    for f in sorted(feats):
        domain = space.domains[f]
        values = rng.sample(domain, rng.randint(1, len(domain) - 1))
        term.append(Literal(f, frozenset(values)))
    return tuple(term)


def random_dl(rng, max_features=5, max_domain=3, max_rules=4):
    space = random_space(rng, max_features, max_domain)
    rules = [DlRule(random_term(rng, space), rng.choice(space.classes))
             for _ in range(rng.randint(1, max_rules))]
    rules.append(DlRule((), rng.choice(space.classes)))
    return DecisionList(space, tuple(rules))


def random_table(rng, max_features=4, max_domain=3):
    space = random_space(rng, max_features, max_domain)
    table = {p: rng.choice(space.classes) for p in iter_space(space)}
    if len(set(table.values())) < 2:      # force non-constant
        first = next(iter(table))
        table[first] = space.classes[0] if table[first] != space.classes[0] \
            else space.classes[1]
    return TabularClassifier(space, table)


def random_wellformed_ds(rng, max_features=4, max_domain=3):
    """A decision set guaranteed well-formed: built from a random table by
       collecting each class's points as single-point terms."""
    table = random_table(rng, max_features, max_domain)
    space = table.space
    class_terms = {}
    for point, klass in table.table.items():
        term = tuple(Literal(f, frozenset({u}))
                     for f, u in zip(space.features, point))
        class_terms.setdefault(klass, []).append(term)
    return DecisionSet(space, {k: tuple(v) for k, v in class_terms.items()})


def random_instance(rng, model):
    space = model.space
    point = tuple(rng.choice(space.domains[i]) for i in space.features)
    return Instance(point, model.predict(point))
