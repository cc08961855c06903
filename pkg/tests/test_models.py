import itertools

import pytest

from xpkit.errors import ContractError, DomainError, ModelError
from xpkit.loader import load_model
from xpkit.models import (DecisionTree, FeatureSpace, Instance,
                          MonotonicClassifier, TabularClassifier, TreeLeaf,
                          TreeNode, consistent_path, iter_space, predict,
                          validate_model)

# The decision list's full truth table (24 rows): ((x1,x2,x3,x4), class)
DL_TRUTH_TABLE = (
    [((0, 0, x3, 0), 1) for x3 in (0, 1)] +
    [((0, 0, x3, 1), 0) for x3 in (0, 1)] +
    [((0, 0, x3, 2), 1) for x3 in (0, 1)] +
    [((0, 1, x3, x4), 1) for x3 in (0, 1) for x4 in (0, 1, 2)] +
    [((1, x2, x3, x4), 0) for x2 in (0, 1) for x3 in (0, 1) for x4 in (0, 1, 2)]
)


def test_dl_truth_table_complete(dl_fig1):
    assert len(DL_TRUTH_TABLE) == dl_fig1.space.num_points()
    for point, klass in DL_TRUTH_TABLE:
        assert predict(dl_fig1, point) == klass, point


def test_dl_default_rule_entry_05(dl_fig1):
    assert predict(dl_fig1, (0, 0, 1, 2)) == 1


def test_dt_prediction_and_partial_truth_tables(dt_fig2):
    assert predict(dt_fig2, (0, 0, 1, 0, 1)) == 1
    # fixing x3=1 and x5=1 forces class 1
    for x1, x2, x4 in itertools.product((0, 1), repeat=3):
        assert predict(dt_fig2, (x1, x2, 1, x4, 1)) == 1
    # with x1=x2=x4=0 the prediction varies with x3, x5
    expect = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1}
    for (x3, x5), klass in expect.items():
        assert predict(dt_fig2, (0, 0, x3, 0, x5)) == klass


def test_or_table_prediction(nn_or_table):
    assert predict(nn_or_table, (1, 1)) == 1
    assert predict(nn_or_table, (0, 0)) == 0
    for point in iter_space(nn_or_table.space):
        assert predict(nn_or_table, point) == (point[0] or point[1])


def test_predict_rejects_out_of_domain(dl_fig1):
    with pytest.raises(DomainError):
        predict(dl_fig1, (0, 0, 1, 3))
    with pytest.raises(DomainError):
        predict(dl_fig1, (0, 0, 1))


def test_consistent_path_p1(dt_fig2):
    assert consistent_path(dt_fig2, (0, 0, 1, 0, 1)) == (1, 2, 4, 7, 10, 15)


def test_consistent_path_q1(dt_fig2):
    assert consistent_path(dt_fig2, (0, 0, 0, 0, 0)) == (1, 2, 4, 6)


def test_single_leaf_tree_path():
    space = FeatureSpace((1,), {1: (0, 1)}, (0, 1))
    dt = DecisionTree(space, {7: TreeLeaf(0)}, root=7)
    assert consistent_path(dt, (0,)) == (7,)
    assert consistent_path(dt, (1,)) == (7,)


def test_paths_enumeration_matches_paper_labels(dt_fig2):
    paths = dt_fig2.paths()
    p = [q for q in paths if dt_fig2.path_class(q) == 1]
    q = [r for r in paths if dt_fig2.path_class(r) == 0]
    assert p == [(1, 2, 4, 7, 10, 15), (1, 2, 4, 7, 11), (1, 2, 5, 8, 13),
                 (1, 2, 5, 9), (1, 3)]
    assert q == [(1, 2, 4, 6), (1, 2, 4, 7, 10, 14), (1, 2, 5, 8, 12)]


def test_every_point_has_exactly_one_consistent_path(dt_fig2):
    paths = dt_fig2.paths()
    for point in iter_space(dt_fig2.space):
        consistent = []
        for path in paths:
            lits = dt_fig2.path_literals(path)
            values = dict(zip(dt_fig2.space.features, point))
            if all(values[f] in allowed for f, allowed in lits.items()):
                consistent.append(path)
        assert consistent == [dt_fig2.consistent_path(point)]


def test_path_literals_intersect_repeated_tests():
    space = FeatureSpace((1,), {1: (0, 1, 2)}, ('a', 'b'))
    nodes = {
        1: TreeNode(1, ((frozenset({0, 1}), 2), (frozenset({2}), 3))),
        2: TreeNode(1, ((frozenset({0}), 4), (frozenset({1, 2}), 5))),
        3: TreeLeaf('b'),
        4: TreeLeaf('a'),
        5: TreeLeaf('b'),
    }
    dt = DecisionTree(space, nodes, root=1)
    assert dt.path_literals((1, 2, 5)) == {1: frozenset({1})}
    assert predict(dt, (1,)) == 'b'


def test_validate_fig2_ok(dt_fig2):
    assert validate_model(dt_fig2).ok


def test_validate_detects_non_exhaustive_edges():
    space = FeatureSpace((1,), {1: (0, 1, 2)}, (0, 1))
    nodes = {1: TreeNode(1, ((frozenset({0}), 2), (frozenset({1}), 3))),
             2: TreeLeaf(0), 3: TreeLeaf(1)}
    report = validate_model(DecisionTree(space, nodes, root=1))
    assert not report.ok
    assert any('not exhaustive' in v for v in report.violations)


def test_validate_detects_overlapping_edges():
    space = FeatureSpace((1,), {1: (0, 1)}, (0, 1))
    nodes = {1: TreeNode(1, ((frozenset({0, 1}), 2), (frozenset({1}), 3))),
             2: TreeLeaf(0), 3: TreeLeaf(1)}
    report = validate_model(DecisionTree(space, nodes, root=1))
    assert not report.ok
    assert any('not disjoint' in v for v in report.violations)


def test_validate_grading_small_monotone(grading_small):
    assert validate_model(grading_small).ok


def test_validate_rejects_non_monotone_table():
    space = FeatureSpace((1,), {1: (0, 1)}, ('lo', 'hi'))
    model = MonotonicClassifier(space, {(0,): 'hi', (1,): 'lo'})
    report = validate_model(model)
    assert not report.ok
    assert any('not monotone' in v for v in report.violations)


def test_validate_rejects_constant_table():
    space = FeatureSpace((1, 2), {1: (0, 1), 2: (0, 1)}, (0, 1))
    model = TabularClassifier(space, {p: 0 for p in iter_space(space)})
    report = validate_model(model)
    assert not report.ok
    assert any('constant' in v for v in report.violations)


def test_instance_binding_checks_prediction(dl_fig1):
    Instance((0, 0, 1, 2), 1).bind(dl_fig1)
    with pytest.raises(ContractError):
        Instance((0, 0, 1, 2), 0).bind(dl_fig1)
    with pytest.raises(DomainError):
        Instance((0, 0, 1, 2), 7).bind(dl_fig1)


def test_predict_is_pure(dt_fig2):
    assert [predict(dt_fig2, (0, 0, 1, 0, 1)) for _ in range(3)] == [1, 1, 1]


def test_grading_prediction_and_monotonicity_sample(grading):
    assert predict(grading, (10, 10, 5, 0)) == 'A'
    assert predict(grading, (0, 0, 0, 0)) == 'F'
    assert predict(grading, (0, 0, 0, 10)) == 'A'
    assert predict(grading, (10, 0, 5, 0)) == 'E'
    assert predict(grading, (0, 10, 10, 0)) == 'B'
    # spot-check monotonicity on a few comparable pairs
    pairs = [((0, 5, 2, 1), (3, 5, 2, 1)), ((1, 1, 1, 1), (1, 1, 1, 9)),
             ((2, 8, 0, 0), (2, 9, 0, 0))]
    rank = grading.rank
    for lo, hi in pairs:
        assert rank(predict(grading, lo)) <= rank(predict(grading, hi))


def test_space_invariants():
    with pytest.raises(ModelError):
        FeatureSpace((), {}, (0, 1))
    with pytest.raises(ModelError):
        FeatureSpace((1,), {1: ()}, (0, 1))
    with pytest.raises(ModelError):
        FeatureSpace((1,), {1: (0, 1)}, (0,))
    space = FeatureSpace((1, 2), {1: (0, 1), 2: (0, 1, 2)}, (0, 1))
    assert space.num_points() == 6
