"""
Clausal formulas and a small complete SAT oracle.

Literals are DIMACS-style signed integers: variable v > 0, its negation -v.
The solver is a plain CDCL with two-watched-literal propagation and
first-UIP clause learning.  Branching is deterministic (lowest-index
unassigned variable, negative polarity first, unless overridden), so
identical inputs always produce identical models and cores.
"""

from collections import namedtuple

from .errors import ContractError


#
#==============================================================================
class VarPool:
    """
        Manager of variable identifiers, optionally keyed by objects.
    """

    def __init__(self, start_from=1):
        self.top = start_from - 1
        self.obj2id = {}
        self.id2obj = {}

    def id(self, obj=None):
        """
            Return the variable associated with obj, creating it on first
            use.  With no argument, return a fresh anonymous variable.
        """
        if obj is None:
            self.top += 1
            return self.top
        if obj not in self.obj2id:
            self.top += 1
            self.obj2id[obj] = self.top
            self.id2obj[self.top] = obj
        return self.obj2id[obj]

    def obj(self, vid):
        return self.id2obj.get(vid)


#
#==============================================================================
def check_clause(lits):
    """
        Normalize a clause: deduplicate literals and reject complementary
        pairs (tautologies) and zero literals.
    """
    out = []
    seen = set()
    for l in lits:
        l = int(l)
        if l == 0:
            raise ContractError('zero is not a literal')
        if -l in seen:
            raise ContractError(f'clause {list(lits)} contains a complementary pair')
        if l not in seen:
            seen.add(l)
            out.append(l)
    return tuple(out)


class CnfFormula:
    """
        A clause database: a list of clauses plus a variable count.
    """

    def __init__(self, clauses=(), num_vars=0):
        self.clauses = []
        self.num_vars = num_vars
        for cl in clauses:
            self.add_clause(cl)

    def add_clause(self, lits):
        cl = check_clause(lits)
        self.clauses.append(cl)
        for l in cl:
            self.num_vars = max(self.num_vars, abs(l))
        return cl

    def extend(self, clauses):
        for cl in clauses:
            self.add_clause(cl)

    def copy(self):
        other = CnfFormula(num_vars=self.num_vars)
        other.clauses = list(self.clauses)
        return other

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def to_dimacs(self):
        lines = [f'p cnf {self.num_vars} {len(self.clauses)}']
        for cl in self.clauses:
            lines.append(' '.join(str(l) for l in cl) + ' 0')
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_dimacs(cls, text):
        num_vars = None
        clauses = []
        cur = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith('c'):
                continue
            if line.startswith('p'):
                parts = line.split()
                if len(parts) != 4 or parts[0] != 'p' or parts[1] != 'cnf':
                    raise ContractError(f'malformed DIMACS header: {line!r}')
                num_vars = int(parts[2])
                continue
            for tok in line.split():
                l = int(tok)
                if l == 0:
                    clauses.append(cur)
                    cur = []
                else:
                    cur.append(l)
        if cur:
            clauses.append(cur)
        if num_vars is None:
            raise ContractError('missing DIMACS header')
        return cls(clauses, num_vars=num_vars)


#
#==============================================================================
Outcome = namedtuple('Outcome', ['sat', 'model', 'core'])


class Solver:
    """
        CDCL solver.  A single instance owns its state and can be reused
        incrementally: clauses may be added between solve() calls and
        solve() accepts assumption literals.  After an UNSAT answer,
        get_core() returns a subset of the assumptions sufficient for
        inconsistency (not necessarily minimal).
    """

    def __init__(self, formula=None, var_order=None, polarity=False):
        # var_order: decision order over variables (default ascending);
        # polarity: preferred branching value, a bool or a per-variable dict
        self.num_vars = 0
        self.clauses = []
        self.watches = {}
        self.assign = []        # var -> True/False/None
        self.level = []
        self.reason = []
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.ok = True
        self.var_order = var_order
        self.polarity = polarity
        self.model = None
        self.core = None
        if formula is not None:
            self.append_formula(formula)

    #
    # -- clause management ----------------------------------------------

    def _grow(self, v):
        # lists are 1-based; index 0 is unused
        if v > self.num_vars:
            self.num_vars = v
            pad = self.num_vars + 1 - len(self.assign)
            if pad > 0:
                self.assign.extend([None] * pad)
                self.level.extend([0] * pad)
                self.reason.extend([None] * pad)

    def add_clause(self, lits):
        cl = list(check_clause(lits))
        for l in cl:
            self._grow(abs(l))
        self._cancel_until(0)
        if not self.ok:
            return
        # at level 0, drop false literals and detect satisfied clauses
        cl2 = []
        for l in cl:
            v = self._value(l)
            if v is True:
                return
            if v is None:
                cl2.append(l)
        if not cl2:
            self.ok = False
            return
        if len(cl2) == 1:
            self._enqueue(cl2[0], None)
            if self._propagate() is not None:
                self.ok = False
            return
        self._attach(cl2)

    def append_formula(self, formula):
        if hasattr(formula, 'num_vars'):
            self._grow(formula.num_vars)
        for cl in formula:
            self.add_clause(cl)

    def _attach(self, cl):
        ci = len(self.clauses)
        self.clauses.append(cl)
        self.watches.setdefault(-cl[0], []).append(ci)
        self.watches.setdefault(-cl[1], []).append(ci)
        return ci

    #
    # -- assignment handling --------------------------------------------

    def _value(self, lit):
        b = self.assign[abs(lit)]
        if b is None:
            return None
        return b if lit > 0 else not b

    def _enqueue(self, lit, reason_ci):
        v = abs(lit)
        self.assign[v] = lit > 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason_ci
        self.trail.append(lit)

    def _cancel_until(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        bound = self.trail_lim[lvl]
        for lit in reversed(self.trail[bound:]):
            self.assign[abs(lit)] = None
        del self.trail[bound:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, len(self.trail))

    #
    # -- search ----------------------------------------------------------

    def _propagate(self):
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            ws = self.watches.get(p)
            if not ws:
                continue
            i = 0
            while i < len(ws):
                ci = ws[i]
                cl = self.clauses[ci]
                if cl[0] == -p:
                    cl[0], cl[1] = cl[1], cl[0]
                if self._value(cl[0]) is True:
                    i += 1
                    continue
                for k in range(2, len(cl)):
                    if self._value(cl[k]) is not False:
                        cl[1], cl[k] = cl[k], cl[1]
                        self.watches.setdefault(-cl[1], []).append(ci)
                        ws[i] = ws[-1]
                        ws.pop()
                        break
                else:
                    if self._value(cl[0]) is False:
                        return ci
                    self._enqueue(cl[0], ci)
                    i += 1
        return None

    def _analyze(self, confl):
        learnt = [0]
        seen = set()
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        while True:
            cl = self.clauses[confl]
            for q in (cl if p is None else cl[1:]):
                v = abs(q)
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    if self.level[v] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                learnt[0] = -p
                break
            confl = self.reason[abs(p)]
            idx -= 1
        if len(learnt) == 1:
            return learnt, 0
        bl = max(self.level[abs(q)] for q in learnt[1:])
        # put a literal of the backjump level in the second watch position
        for k in range(1, len(learnt)):
            if self.level[abs(learnt[k])] == bl:
                learnt[1], learnt[k] = learnt[k], learnt[1]
                break
        return learnt, bl

    def _analyze_final(self, failed):
        """
            Collect the assumptions responsible for the falsification of
            the assumption literal `failed`.
        """
        core = {failed}
        if not self.trail_lim:
            return core
        seen = {abs(failed)}
        for i in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            lit = self.trail[i]
            v = abs(lit)
            if v not in seen:
                continue
            seen.discard(v)
            if self.reason[v] is None:
                core.add(lit)
            else:
                for q in self.clauses[self.reason[v]][1:]:
                    if self.level[abs(q)] > 0:
                        seen.add(abs(q))
        return core

    def _decide(self):
        order = self.var_order if self.var_order is not None \
            else range(1, self.num_vars + 1)
        for v in order:
            if self.assign[v] is None:
                if isinstance(self.polarity, dict):
                    pol = self.polarity.get(v, False)
                else:
                    pol = self.polarity
                return v if pol else -v
        return None

    def solve(self, assumptions=()):
        self.model = None
        self.core = None
        self._cancel_until(0)
        if not self.ok:
            self.core = []
            return False
        if self._propagate() is not None:
            self.ok = False
            self.core = []
            return False
        assumptions = [int(a) for a in assumptions]
        n_assumed = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self.trail_lim:
                    self.ok = False
                    self.core = []
                    return False
                learnt, bl = self._analyze(confl)
                self._cancel_until(bl)
                n_assumed = min(n_assumed, bl)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    ci = self._attach(learnt)
                    self._enqueue(learnt[0], ci)
                continue
            if n_assumed < len(assumptions):
                a = assumptions[n_assumed]
                self._grow(abs(a))
                val = self._value(a)
                if val is False:
                    self.core = sorted(self._analyze_final(a), key=abs)
                    self._cancel_until(0)
                    return False
                self.trail_lim.append(len(self.trail))
                if val is None:
                    self._enqueue(a, None)
                n_assumed += 1
                continue
            lit = self._decide()
            if lit is None:
                self.model = [v if self.assign[v] else -v
                              for v in range(1, self.num_vars + 1)]
                self._cancel_until(0)
                return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)

    def get_model(self):
        return self.model

    def get_core(self):
        return self.core


#
#==============================================================================
def solve(formula, assumptions=()):
    """
        One-shot decision oracle: returns Outcome(sat, model, core).
    """
    slv = Solver(formula)
    sat = slv.solve(assumptions=assumptions)
    return Outcome(sat, slv.get_model(), slv.get_core())


#
#==============================================================================
def horn_consistent(clauses, assumptions=()):
    """
        Decide consistency of a Horn formula plus a set of positive unit
        assumptions by counter-based unit propagation, in time linear in
        the formula size.

        :param clauses: iterable of clauses, each with at most one
            positive literal
        :param assumptions: variables asserted true
        :return: True iff consistent
    """
    clauses = [check_clause(cl) for cl in clauses]
    pos = []            # positive literal of each clause (or None)
    counts = []         # number of negative literals not yet satisfied
    occs = {}           # var -> clauses in which -var occurs
    queue = []
    true_vars = set()

    def assert_var(v):
        if v not in true_vars:
            true_vars.add(v)
            queue.append(v)

    for ci, cl in enumerate(clauses):
        p = [l for l in cl if l > 0]
        if len(p) > 1:
            raise ContractError(f'clause {list(cl)} is not Horn')
        pos.append(p[0] if p else None)
        neg = [-l for l in cl if l < 0]
        counts.append(len(neg))
        for v in neg:
            occs.setdefault(v, []).append(ci)
        if not neg:
            if p:
                assert_var(p[0])
            else:
                return False    # empty clause
    for a in assumptions:
        a = int(a)
        if a <= 0:
            raise ContractError('Horn assumptions must be positive units')
        assert_var(a)

    fired = [False] * len(clauses)
    while queue:
        v = queue.pop()
        for ci in occs.get(v, ()):
            if fired[ci]:
                continue
            counts[ci] -= 1
            if counts[ci] == 0:
                fired[ci] = True
                if pos[ci] is None:
                    return False
                assert_var(pos[ci])
    return True


#
#==============================================================================
def at_most_k(lits, k, pool):
    """
        Sequential-counter CNF encoding of sum(lits) <= k.  Auxiliary
        variables are drawn from pool; the clause list is returned.
    """
    lits = list(lits)
    n = len(lits)
    if k >= n:
        return []
    if k == 0:
        return [(-l,) for l in lits]
    # s[i][j] is true when at least j+1 of the first i+1 literals hold
    s = [[pool.id() for _ in range(k)] for _ in range(n - 1)]
    clauses = [(-lits[0], s[0][0])]
    for j in range(1, k):
        clauses.append((-s[0][j],))
    for i in range(1, n - 1):
        clauses.append((-lits[i], s[i][0]))
        clauses.append((-s[i - 1][0], s[i][0]))
        for j in range(1, k):
            clauses.append((-lits[i], -s[i - 1][j - 1], s[i][j]))
            clauses.append((-s[i - 1][j], s[i][j]))
        clauses.append((-lits[i], -s[i - 1][k - 1]))
    clauses.append((-lits[n - 1], -s[n - 2][k - 1]))
    return clauses
