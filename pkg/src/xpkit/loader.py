"""
JSON ingestion of models, instances and constraint files.

One document per model:

    {"type": "dt"|"dl"|"ds"|"monotonic"|"table",
     "features": [{"id": 1, "domain": "bool"},
                  {"id": 4, "domain": {"lo": 0, "hi": 2}}, ...],
     "classes": [...],
     ...body fields per type...}

Instance files are {"point": [...], "class": c}.  Unknown fields are
rejected everywhere.  Numeric literals inside monotonic expressions are
parsed as exact rationals, never floats.
"""

import json
from fractions import Fraction
from importlib import resources

from .errors import DomainError, ModelError
from .models import (Constraint, DecisionList, DecisionSet, DecisionTree,
                     DlRule, FeatureSpace, FvLiteral, Instance, Literal,
                     MonotonicClassifier, TabularClassifier, TreeLeaf,
                     TreeNode, iter_space)

MODEL_TYPES = ('dt', 'dl', 'ds', 'monotonic', 'table')


def _load_json(source):
    if isinstance(source, dict):
        return source
    with open(source, 'r', encoding='utf-8') as fp:
        return json.load(fp, parse_float=Fraction)


def _check_fields(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ModelError(f'{where}: expected an object')
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ModelError(f'{where}: unknown fields {sorted(unknown)}')
    missing = {k for k in allowed if allowed[k]} - set(obj)
    if missing:
        raise ModelError(f'{where}: missing fields {sorted(missing)}')


#
#==============================================================================
def _parse_space(doc):
    feats = []
    domains = {}
    for entry in doc['features']:
        _check_fields(entry, {'id': True, 'domain': True}, 'feature entry')
        fid = entry['id']
        dom = entry['domain']
        if dom == 'bool':
            domains[fid] = (0, 1)
        else:
            _check_fields(dom, {'lo': True, 'hi': True}, f'domain of feature {fid}')
            if dom['hi'] < dom['lo']:
                raise ModelError(f'feature {fid}: empty integer range')
            domains[fid] = tuple(range(dom['lo'], dom['hi'] + 1))
        feats.append(fid)
    return FeatureSpace(tuple(sorted(feats)), domains, tuple(doc['classes']))


def _parse_literal(obj, space, where):
    _check_fields(obj, {'f': True, 'in': True}, where)
    values = frozenset(obj['in'])
    return Literal(obj['f'], values)


def _parse_term(items, space, where):
    return tuple(_parse_literal(o, space, where) for o in items)


def _flat_table(space, values, where):
    points = list(iter_space(space))
    if len(values) != len(points):
        raise ModelError(f'{where}: table has {len(values)} entries, '
                         f'the space has {len(points)} points')
    return dict(zip(points, values))


def load_model(source):
    """Parse and structurally validate one model document."""
    doc = _load_json(source)
    if 'type' not in doc or doc['type'] not in MODEL_TYPES:
        raise ModelError(f"model 'type' must be one of {MODEL_TYPES}")
    kind = doc['type']
    base = {'type': True, 'features': True, 'classes': True}
    if kind == 'dt':
        _check_fields(doc, dict(base, root=True, nodes=True), 'dt model')
        space = _parse_space(doc)
        nodes = {}
        for entry in doc['nodes']:
            if 'class' in entry:
                _check_fields(entry, {'id': True, 'class': True}, 'leaf node')
                nodes[entry['id']] = TreeLeaf(entry['class'])
            else:
                _check_fields(entry, {'id': True, 'feature': True, 'edges': True},
                              'internal node')
                edges = []
                for e in entry['edges']:
                    _check_fields(e, {'values': True, 'to': True}, 'edge')
                    edges.append((frozenset(e['values']), e['to']))
                nodes[entry['id']] = TreeNode(entry['feature'], tuple(edges))
        model = DecisionTree(space, nodes, doc['root'])
    elif kind == 'dl':
        _check_fields(doc, dict(base, rules=True), 'dl model')
        space = _parse_space(doc)
        rules = []
        for j, entry in enumerate(doc['rules']):
            _check_fields(entry, {'if': True, 'then': True}, f'rule {j + 1}')
            rules.append(DlRule(_parse_term(entry['if'], space, f'rule {j + 1}'),
                                entry['then']))
        model = DecisionList(space, tuple(rules))
    elif kind == 'ds':
        _check_fields(doc, dict(base, rules=True), 'ds model')
        space = _parse_space(doc)
        class_terms = {}
        for entry in doc['rules']:
            _check_fields(entry, {'class': True, 'terms': True}, 'ds class entry')
            klass = entry['class']
            if klass in class_terms:
                raise ModelError(f'class {klass!r} listed twice')
            class_terms[klass] = tuple(
                _parse_term(t, space, f'class {klass!r}') for t in entry['terms'])
        model = DecisionSet(space, class_terms)
    elif kind == 'monotonic':
        _check_fields(doc, dict(base, table=False, expr=False), 'monotonic model')
        space = _parse_space(doc)
        if ('table' in doc) == ('expr' in doc):
            raise ModelError("monotonic model needs exactly one of 'table'/'expr'")
        if 'table' in doc:
            table = _flat_table(space, doc['table'], 'monotonic model')
        else:
            evaluator = ExprEvaluator(doc['expr'], space)
            table = {point: evaluator(point) for point in iter_space(space)}
        model = MonotonicClassifier(space, table)
    else:
        _check_fields(doc, dict(base, table=True), 'table model')
        space = _parse_space(doc)
        model = TabularClassifier(space, _flat_table(space, doc['table'],
                                                     'table model'))
    from .models import validate_model
    report = validate_model(model)
    if not report.ok:
        raise ModelError('; '.join(report.violations))
    return model


#
#==============================================================================
class ExprEvaluator:
    """
        Evaluator for the composable arithmetic form of a monotonic
        classifier.  All arithmetic is exact (Fractions), so threshold
        comparisons never suffer floating-point error.
    """

    OPS = ('add', 'sub', 'mul', 'max', 'min', 'ite')
    CMPS = ('ge', 'le', 'gt', 'lt', 'eq')

    def __init__(self, doc, space):
        _check_fields(doc, {'defs': False, 'result': True}, 'expr')
        self.space = space
        self.defs = doc.get('defs', {})
        self.result = doc['result']

    def __call__(self, point):
        env = {}
        for name, expr in self.defs.items():
            env[name] = self._eval(expr, point, env)
        return self._eval(self.result, point, env)

    def _eval(self, node, point, env):
        if 'feature' in node:
            _check_fields(node, {'feature': True}, 'expr node')
            return Fraction(self.space.value_of(point, node['feature']))
        if 'const' in node:
            _check_fields(node, {'const': True}, 'expr node')
            return Fraction(node['const'])
        if 'ref' in node:
            _check_fields(node, {'ref': True}, 'expr node')
            if node['ref'] not in env:
                raise ModelError(f"undefined expression name {node['ref']!r}")
            return env[node['ref']]
        if 'klass' in node:
            _check_fields(node, {'klass': True}, 'expr node')
            return node['klass']
        if 'op' not in node or node['op'] not in self.OPS:
            raise ModelError(f'bad expression node: {node}')
        op = node['op']
        if op == 'ite':
            _check_fields(node, {'op': True, 'if': True, 'then': True,
                                 'else': True}, 'ite node')
            cond = node['if']
            _check_fields(cond, {'cmp': True, 'lhs': True, 'rhs': True},
                          'comparison')
            if cond['cmp'] not in self.CMPS:
                raise ModelError(f"unknown comparison {cond['cmp']!r}")
            lhs = self._eval(cond['lhs'], point, env)
            rhs = self._eval(cond['rhs'], point, env)
            taken = {'ge': lhs >= rhs, 'le': lhs <= rhs, 'gt': lhs > rhs,
                     'lt': lhs < rhs, 'eq': lhs == rhs}[cond['cmp']]
            return self._eval(node['then'] if taken else node['else'], point, env)
        _check_fields(node, {'op': True, 'args': True}, f'{op} node')
        args = [self._eval(a, point, env) for a in node['args']]
        if op == 'add':
            return sum(args)
        if op == 'mul':
            out = Fraction(1)
            for a in args:
                out *= a
            return out
        if op == 'sub':
            if len(args) != 2:
                raise ModelError('sub takes exactly two arguments')
            return args[0] - args[1]
        return max(args) if op == 'max' else min(args)


#
#==============================================================================
def load_instance(source, model=None):
    doc = _load_json(source)
    _check_fields(doc, {'point': True, 'class': True}, 'instance')
    inst = Instance(tuple(doc['point']), doc['class'])
    if model is not None:
        inst.bind(model)
    return inst


def load_constraint(source, space=None):
    doc = _load_json(source)
    _check_fields(doc, {'cnf': True}, 'constraint')
    clauses = []
    for cl in doc['cnf']:
        lits = []
        for obj in cl:
            _check_fields(obj, {'f': True, 'v': True, 'neg': False},
                          'constraint literal')
            lits.append(FvLiteral(obj['f'], obj['v'], bool(obj.get('neg', False))))
        clauses.append(tuple(lits))
    constraint = Constraint(tuple(clauses))
    if space is not None:
        for cl in constraint.clauses:
            for lit in cl:
                if lit.feature not in space.features:
                    raise DomainError(f'constraint mentions unknown feature '
                                      f'{lit.feature}')
                if lit.value not in space.domains[lit.feature]:
                    raise DomainError(f'constraint value {lit.value!r} outside '
                                      f'the domain of feature {lit.feature}')
    return constraint


#
#==============================================================================
def fixture_path(name):
    """Filesystem path of one of the bundled example files."""
    return resources.files('xpkit.fixtures').joinpath(name)


def load_fixture_model(name):
    return load_model(str(fixture_path(name)))


def load_fixture_instance(name, model=None):
    return load_instance(str(fixture_path(name)), model=model)
