import itertools

import pytest
from hypothesis import given, settings, strategies as st

from xpkit.errors import ContractError
from xpkit.inconsistency import (SoftPartition, enumerate_mus_mcs, extract_mcs,
                                 extract_mus, partition_to_dimacs)
from xpkit.sat import CnfFormula

from helpers import cnf_satisfiable, make_rng, random_cnf


def ex3_partition():
    # B = {c4, c5}, S = {c1, c2, c3}
    return SoftPartition(hard=[(-1, -2), (-1, -3)],
                         soft=[(1,), (2,), (3,)],
                         labels=['c1', 'c2', 'c3'])


def brute_mus_mcs(partition):
    """Powerset classification of all soft subsets into MUSes and MCSes."""
    n = len(partition)
    hard = list(partition.hard)
    nv = partition.hard.num_vars
    nv = max(nv, max((abs(l) for cl in partition.soft for l in cl), default=0))

    def consistent(active):
        cls = hard + [partition.soft[i] for i in active]
        return cnf_satisfiable(cls, nv)

    subsets = [frozenset(c) for size in range(n + 1)
               for c in itertools.combinations(range(n), size)]
    muses = [s for s in subsets
             if not consistent(s) and all(consistent(s - {i}) for i in s)]
    full = frozenset(range(n))
    mcses = [s for s in subsets
             if consistent(full - s) and
             all(not consistent(full - (s - {i})) for i in s)]
    return set(muses), set(mcses)


def labelled(partition, indices):
    return frozenset(partition.labels[i] for i in indices)


def test_ex3_extract_mus():
    p = ex3_partition()
    mus = extract_mus(p)
    assert labelled(p, mus) in ({'c1', 'c2'}, {'c1', 'c3'})


def test_ex3_extract_mcs():
    p = ex3_partition()
    mcs = extract_mcs(p)
    assert labelled(p, mcs) in ({'c1'}, {'c2', 'c3'})


def test_mus_of_already_minimal_soft_set():
    p = SoftPartition(hard=[(-1, -2)], soft=[(1,), (2,)])
    assert extract_mus(p) == frozenset({0, 1})


def test_mcs_of_consistent_partition_is_empty():
    p = SoftPartition(hard=[(1, 2)], soft=[(1,), (2,)])
    assert extract_mcs(p) == frozenset()


def test_extract_mus_requires_inconsistency():
    p = SoftPartition(hard=[(1, 2)], soft=[(1,)])
    with pytest.raises(ContractError):
        extract_mus(p)


def test_extract_mcs_requires_consistent_background():
    p = SoftPartition(hard=[(1,), (-1,)], soft=[(2,)])
    with pytest.raises(ContractError):
        extract_mcs(p)


def test_mus_postconditions_rechecked():
    p = ex3_partition()
    mus = extract_mus(p)
    hard = list(p.hard)
    nv = 3
    assert not cnf_satisfiable(hard + [p.soft[i] for i in mus], nv)
    for i in mus:
        assert cnf_satisfiable(hard + [p.soft[j] for j in mus - {i}], nv)


def test_ex3_enumeration_exact():
    p = ex3_partition()
    muses, mcses = set(), set()
    for kind, idx in enumerate_mus_mcs(p):
        (muses if kind == 'MUS' else mcses).add(labelled(p, idx))
    assert muses == {frozenset({'c1', 'c2'}), frozenset({'c1', 'c3'})}
    assert mcses == {frozenset({'c1'}), frozenset({'c2', 'c3'})}


def test_enumeration_on_consistent_partition():
    p = SoftPartition(hard=[(1, 2)], soft=[(1,), (2,)])
    results = list(enumerate_mus_mcs(p))
    # the only correction set is empty: no MUSes, one trivial MCS report
    assert all(kind == 'MCS' for kind, _ in results)
    assert [idx for _, idx in results] == [frozenset()]


def test_enumeration_respects_limit():
    p = ex3_partition()
    assert len(list(enumerate_mus_mcs(p, limit=2))) == 2


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_enumeration_matches_powerset_classification(data):
    rng = make_rng(data.draw(st.integers(min_value=0, max_value=10 ** 6)))
    nv = rng.randint(1, 4)
    hard = random_cnf(rng, nv, rng.randint(0, 3), width=2)
    while not cnf_satisfiable(hard, nv):
        hard = random_cnf(rng, nv, rng.randint(0, 3), width=2)
    soft = random_cnf(rng, nv, rng.randint(1, 4), width=2)
    p = SoftPartition(hard=hard, soft=soft)
    want_mus, want_mcs = brute_mus_mcs(p)
    got_mus, got_mcs = set(), set()
    seen = []
    for kind, idx in enumerate_mus_mcs(p):
        seen.append((kind, idx))
        (got_mus if kind == 'MUS' else got_mcs).add(idx)
    assert len(seen) == len(set(seen))       # no duplicates
    assert got_mus == want_mus
    assert got_mcs == want_mcs


def test_mhs_duality_on_ex3():
    from xpkit.hitting import all_minimal_hitting_sets, SetCollection
    p = ex3_partition()
    muses, mcses = set(), set()
    for kind, idx in enumerate_mus_mcs(p):
        (muses if kind == 'MUS' else mcses).add(idx)
    universe = frozenset(range(len(p)))
    assert set(all_minimal_hitting_sets(SetCollection(universe, mcses))) == muses
    assert set(all_minimal_hitting_sets(SetCollection(universe, muses))) == mcses


def test_partition_to_dimacs_sidecar():
    import json
    p = ex3_partition()
    dimacs, sidecar = partition_to_dimacs(p)
    assert dimacs.startswith('p cnf ')
    CnfFormula.from_dimacs(dimacs)
    data = json.loads(sidecar)
    assert sorted(v['label'] for v in data['selectors'].values()) == ['c1', 'c2', 'c3']
