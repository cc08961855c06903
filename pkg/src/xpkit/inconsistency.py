"""
MUS and MCS extraction over hard/soft clause partitions.

Soft clauses are guarded by fresh selector variables assumed true, so a
soft clause is removed by dropping its selector assumption; one
incremental solver serves the whole extraction.  Results identify soft
clauses by their index in the partition.
"""

import json

from .errors import ContractError
from .sat import CnfFormula, Solver

#
#==============================================================================
class SoftPartition:
    """
        A clause set split into hard background clauses and removable
        soft clauses, with an optional label per soft clause.
    """

    def __init__(self, hard, soft, labels=None):
        self.hard = hard if isinstance(hard, CnfFormula) else CnfFormula(hard)
        self.soft = [tuple(cl) for cl in soft]
        if labels is None:
            labels = list(range(len(self.soft)))
        if len(labels) != len(self.soft):
            raise ContractError('one label per soft clause required')
        self.labels = list(labels)

    def __len__(self):
        return len(self.soft)


class _SelectorSolver:
    """Incremental solver with one selector variable per soft clause."""

    def __init__(self, partition):
        self.slv = Solver(partition.hard)
        nv = max(partition.hard.num_vars,
                 max((abs(l) for cl in partition.soft for l in cl), default=0))
        self.selectors = []
        for cl in partition.soft:
            nv += 1
            self.selectors.append(nv)
            self.slv.add_clause((-nv,) + tuple(cl))

    def consistent(self, active):
        """Is hard + {soft[i] : i in active} consistent?"""
        return self.slv.solve(assumptions=[self.selectors[i] for i in sorted(active)])

    def model(self):
        return self.slv.get_model()


#
#==============================================================================
def extract_mus(partition, within=None, solver=None):
    """
        Deletion-based extraction of one MUS of the partition: scan the
        soft clauses once, dropping each whose removal keeps the set
        inconsistent.  At most |soft| oracle calls.

        :param within: optional subset of soft indices to shrink instead
            of the full soft set (it must itself be inconsistent with the
            hard clauses).
        :return: frozenset of soft-clause indices.
    """
    slv = solver or _SelectorSolver(partition)
    keep = sorted(range(len(partition)) if within is None else within)
    if slv.consistent(keep):
        raise ContractError('hard + soft clauses are consistent; no MUS exists')
    result = list(keep)
    for i in keep:
        trial = [j for j in result if j != i]
        if not slv.consistent(trial):
            result = trial
    return frozenset(result)


def extract_mcs(partition, seed=(), solver=None):
    """
        Extraction of one MCS by growing a maximal satisfiable subset:
        every soft clause that can be added while staying consistent is
        kept, and the complement of the grown set is the MCS.

        :param seed: soft indices the MSS must contain.
        :return: frozenset of soft-clause indices.
    """
    slv = solver or _SelectorSolver(partition)
    if not slv.consistent(seed):
        raise ContractError('background (plus seed) is inconsistent')
    kept = sorted(seed)
    for i in range(len(partition)):
        if i in kept:
            continue
        if slv.consistent(kept + [i]):
            kept.append(i)
            kept.sort()
    return frozenset(range(len(partition))) - frozenset(kept)


def enumerate_mus_mcs(partition, limit=None):
    """
        Complete, duplicate-free enumeration of all MUSes and MCSes of
        the partition, yielding ('MUS', indices) / ('MCS', indices)
        pairs.  Seeds are picked by a map solver biased towards maximal
        subsets; unsatisfiable seeds are shrunk to MUSes and satisfiable
        ones grown to MSSes whose complements are MCSes.
    """
    slv = _SelectorSolver(partition)
    n = len(partition)
    map_slv = Solver(polarity=True)
    map_slv._grow(n)
    emitted = 0
    while map_slv.solve():
        if limit is not None and emitted >= limit:
            return
        model = map_slv.get_model()
        seed = [i for i in range(n) if model[i] > 0]
        if slv.consistent(seed):
            mcs = extract_mcs(partition, seed=seed, solver=slv)
            map_slv.add_clause([i + 1 for i in sorted(mcs)])
            yield 'MCS', mcs
        else:
            mus = extract_mus(partition, within=seed, solver=slv)
            map_slv.add_clause([-(i + 1) for i in sorted(mus)])
            yield 'MUS', mus
        emitted += 1


#
#==============================================================================
def partition_to_dimacs(partition):
    """
        Render a soft partition as a selector-guarded DIMACS formula plus
        the sidecar JSON mapping selector variables to soft labels.
    """
    slv = _SelectorSolver(partition)
    formula = CnfFormula(num_vars=max(partition.hard.num_vars,
                                      slv.selectors[-1] if slv.selectors else 0))
    for cl in partition.hard:
        formula.add_clause(cl)
    for sel, cl in zip(slv.selectors, partition.soft):
        formula.add_clause((-sel,) + tuple(cl))
    sidecar = {
        'selectors': {str(sel): {'index': i, 'label': partition.labels[i]}
                      for i, sel in enumerate(slv.selectors)},
    }
    return formula.to_dimacs(), json.dumps(sidecar, indent=2, sort_keys=True)
