"""Finite structures with extensions and anti-extensions, and the
non-deterministic two-valued valuations over them.

A valuation is fixed by a structure plus a :class:`ChoiceAssignment`: a 0/1
value for each *choice atom* (``circ A``, ``not circ A``, ``not bull A``)
reachable from the sentences of interest.  Everything else is computed by
structural recursion.  Choice atoms are keyed by canonical sentences, so
alphabetic variants and constants denoting the same element share a value.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import product

from .sexpr import ParseError, SList, Sym, line_of, read_one
from .syntax import (
    And, Atom, Bull, Circ, Eq, Exists, Forall, Not, Or,
    canonicalize, elem, elem_name, formula_from_sexpr, is_elem, is_var, rename_bound,
    require_sentence, size, substitute, terms_of, to_sexpr,
)

NONE, E1, E2, E1E2 = "none", "E1", "E2", "E1E2"
CONSTRAINTS = (NONE, E1, E2, E1E2)

CIRC, NEG_CIRC, NEG_BULL = "circ", "negcirc", "negbull"
_KIND_ORDER = {CIRC: 0, NEG_CIRC: 1, NEG_BULL: 2}


class StructureError(ValueError):
    pass


class EvaluationError(Exception):
    pass


class CapExceeded(Exception):
    def __init__(self, count, cap):
        super().__init__(f"closure has {count} choice atoms, cap is {cap}")
        self.count = count
        self.cap = cap


def has_e1(constraint):
    return constraint in (E1, E1E2)


def has_e2(constraint):
    return constraint in (E2, E1E2)


@dataclass(frozen=True)
class PredInterp:
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()
    arity: int = None

    def __post_init__(self):
        object.__setattr__(self, "pos", frozenset(tuple(t) for t in self.pos))
        object.__setattr__(self, "neg", frozenset(tuple(t) for t in self.neg))
        if self.arity is None:
            arities = {len(t) for t in self.pos | self.neg}
            if len(arities) == 1:
                object.__setattr__(self, "arity", arities.pop())


@dataclass(frozen=True)
class Structure:
    domain: tuple
    assign: dict = field(default_factory=dict)
    preds: dict = field(default_factory=dict)
    identity_neg: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "assign", dict(self.assign))
        object.__setattr__(self, "preds", {
            p: (i if isinstance(i, PredInterp) else PredInterp(*i))
            for p, i in self.preds.items()})
        object.__setattr__(self, "identity_neg", frozenset(tuple(t) for t in self.identity_neg))

    def interp(self, pred):
        try:
            return self.preds[pred]
        except KeyError:
            raise EvaluationError(f"predicate {pred!r} is not interpreted by the structure") from None

    def __str__(self):
        return structure_to_text(self)


def validate_structure(s, constraint=NONE):
    """Raise :class:`StructureError` unless ``s`` is a structure satisfying
    ``constraint``."""
    if constraint not in CONSTRAINTS:
        raise StructureError(f"unknown constraint {constraint!r}")
    if not s.domain:
        raise StructureError("empty domain: the domain must be non-empty")
    dom = set(s.domain)
    if len(dom) != len(s.domain):
        raise StructureError("duplicate domain elements")
    for c, d in s.assign.items():
        if d not in dom:
            raise StructureError(f"constant {c} assigned to {d}, which is not in the domain")
    for p, i in sorted(s.preds.items()):
        for label, tuples in (("pos", i.pos), ("neg", i.neg)):
            for t in sorted(tuples):
                if i.arity is not None and len(t) != i.arity:
                    raise StructureError(f"{p} {label}: tuple {t} has the wrong arity")
                if any(x not in dom for x in t):
                    raise StructureError(f"{p} {label}: tuple {t} is outside D^{len(t)}")
        if has_e1(constraint):
            if i.arity is None:
                if not (i.pos | i.neg):
                    raise StructureError(f"E1 violated: {p} has empty pos ∪ neg")
            else:
                for t in product(s.domain, repeat=i.arity):
                    if t not in i.pos and t not in i.neg:
                        raise StructureError(f"E1 violated: {p} tuple {t} in neither pos nor neg")
        if has_e2(constraint):
            both = sorted(i.pos & i.neg)
            if both:
                raise StructureError(f"E2 violated: {p} tuple {both[0]} in both pos and neg")
    for t in sorted(s.identity_neg):
        if len(t) != 2 or any(x not in dom for x in t):
            raise StructureError(f"identity neg: pair {t} is outside D^2")
    if has_e1(constraint):
        for a, b in product(s.domain, repeat=2):
            if a != b and (a, b) not in s.identity_neg:
                raise StructureError(f"E1 violated: identity pair {(a, b)} in neither pos nor neg")
    if has_e2(constraint):
        for a in s.domain:
            if (a, a) in s.identity_neg:
                raise StructureError(f"E2 violated: identity pair {(a, a)} in both pos and neg")


# ------------------------------------------------------------ choice atoms

@dataclass(frozen=True)
class ChoiceAtom:
    kind: str
    key: object  # canonical sentence

    def sort_key(self):
        return (size(self.key), to_sexpr(self.key), _KIND_ORDER[self.kind])

    def formula(self):
        """The sentence whose value this atom fixes."""
        if self.kind == CIRC:
            return Circ(self.key)
        if self.kind == NEG_CIRC:
            return Not(Circ(self.key))
        return Not(Bull(self.key))

    def __str__(self):
        return f"({self.kind} {to_sexpr(self.key)})"


def _atom(kind, key):
    return ChoiceAtom(kind, rename_bound(key))


class ChoiceAssignment(Mapping):
    """Immutable map from choice atoms to 0/1, iterated in atom order."""

    def __init__(self, values=()):
        items = dict(values)
        self._atoms = tuple(sorted(items, key=ChoiceAtom.sort_key))
        self._values = {a: int(items[a]) for a in self._atoms}

    def __getitem__(self, atom):
        return self._values[atom]

    def __iter__(self):
        return iter(self._atoms)

    def __len__(self):
        return len(self._atoms)

    def __hash__(self):
        return hash(tuple(self._values.items()))

    def __eq__(self, other):
        if isinstance(other, ChoiceAssignment):
            return self._values == other._values
        return NotImplemented

    def __repr__(self):
        return f"ChoiceAssignment({choices_to_text(self)})"


# -------------------------------------------------------------- evaluation

class Evaluator:
    """Evaluates ground sentences (element names only) under one structure
    and one (possibly partial) choice assignment.  Memoized per instance."""

    def __init__(self, structure, choices):
        self.s = structure
        self.choices = choices
        self.memo = {}

    def value(self, f):
        v = self.memo.get(f)
        if v is None:
            v = self._value(f)
            self.memo[f] = v
        return v

    def _choice(self, kind, key):
        atom = _atom(kind, key)
        try:
            return self.choices[atom]
        except KeyError:
            raise EvaluationError(f"missing choice atom {atom}") from None

    def _value(self, f):
        if isinstance(f, Atom):
            return int(tuple(map(elem_name, f.args)) in self.s.interp(f.pred).pos)
        if isinstance(f, Eq):
            return int(f.left == f.right)
        if isinstance(f, And):
            return self.value(f.left) and self.value(f.right)
        if isinstance(f, Or):
            return self.value(f.left) or self.value(f.right)
        if isinstance(f, Circ):
            return self._choice(CIRC, f.body)
        if isinstance(f, Bull):
            return 1 - self._choice(CIRC, f.body)
        if isinstance(f, Forall):
            return int(all(self.value(substitute(f.body, f.var, elem(d))) for d in self.s.domain))
        if isinstance(f, Exists):
            return int(any(self.value(substitute(f.body, f.var, elem(d))) for d in self.s.domain))
        if isinstance(f, Not):
            return self._negated(f.body)
        raise TypeError(f"not a formula: {f!r}")

    def _negated(self, g):
        if isinstance(g, Atom):
            return int(tuple(map(elem_name, g.args)) in self.s.interp(g.pred).neg)
        if isinstance(g, Eq):
            return int((elem_name(g.left), elem_name(g.right)) in self.s.identity_neg)
        if isinstance(g, Not):
            return self.value(g.body)
        if isinstance(g, And):
            return self.value(Not(g.left)) or self.value(Not(g.right))
        if isinstance(g, Or):
            return self.value(Not(g.left)) and self.value(Not(g.right))
        if isinstance(g, Circ):
            return self._choice(NEG_CIRC, g.body)
        if isinstance(g, Bull):
            return self._choice(NEG_BULL, g.body)
        if isinstance(g, Forall):
            return int(any(self.value(Not(substitute(g.body, g.var, elem(d)))) for d in self.s.domain))
        if isinstance(g, Exists):
            return int(all(self.value(Not(substitute(g.body, g.var, elem(d)))) for d in self.s.domain))
        raise TypeError(f"not a formula: {g!r}")


def ground(s, sentence):
    """Canonical ground form: constants replaced by their elements."""
    try:
        return canonicalize(sentence, s.assign)
    except KeyError as e:
        raise EvaluationError(e.args[0]) from None


@dataclass(frozen=True)
class Interpretation:
    structure: Structure
    choices: ChoiceAssignment


def evaluate(i, sentence):
    """Value (0 or 1) of ``sentence`` in interpretation ``i``."""
    return Evaluator(i.structure, i.choices).value(ground(i.structure, sentence))


# ----------------------------------------------------------------- closure

def _support(f, out, s):
    """Choice atoms the evaluation of ground ``f`` reads; classicality support of
    every circ atom (its operand and the operand's negation) included."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, (Atom, Eq)):
            continue
        if isinstance(g, (And, Or)):
            stack += (g.left, g.right)
        elif isinstance(g, (Circ, Bull)):
            a = _atom(CIRC, g.body)
            if a not in out:
                out.add(a)
                stack += (a.key, Not(a.key))
        elif isinstance(g, (Forall, Exists)):
            stack += (substitute(g.body, g.var, elem(d)) for d in s.domain)
        elif isinstance(g, Not):
            h = g.body
            if isinstance(h, (Atom, Eq)):
                continue
            if isinstance(h, Not):
                stack.append(h.body)
            elif isinstance(h, (And, Or)):
                stack += (Not(h.left), Not(h.right))
            elif isinstance(h, Circ):
                out.add(_atom(NEG_CIRC, h.body))
            elif isinstance(h, Bull):
                out.add(_atom(NEG_BULL, h.body))
            elif isinstance(h, (Forall, Exists)):
                stack += (Not(substitute(h.body, h.var, elem(d))) for d in s.domain)
    return out


def closure(sentences, s):
    """All choice atoms needed to evaluate ``sentences`` on structure ``s``,
    in the fixed enumeration order."""
    out = set()
    for sent in sentences:
        _support(ground(s, sent), out, s)
    return sorted(out, key=ChoiceAtom.sort_key)


def _classical_ok(s, atom, partial):
    ev = Evaluator(s, partial)
    return ev.value(atom.key) != ev.value(Not(atom.key))


def is_consistent(s, choices):
    """Classicality check: every circ atom set to 1 makes its operand classical."""
    return all(_classical_ok(s, a, choices)
               for a, v in choices.items() if a.kind == CIRC and v == 1)


def enumerate_valuations(s, sentences, cap=16):
    """Yield every classicality-consistent assignment over the closure of
    ``sentences``, lexicographically (first atom most significant, 0 < 1)."""
    atoms = closure(sentences, s)
    if len(atoms) > cap:
        raise CapExceeded(len(atoms), cap)
    return _enumerate(s, atoms)


def _enumerate(s, atoms):
    index = {a: i for i, a in enumerate(atoms)}
    # each circ constraint is checked once every atom it reads is assigned
    checks = [[] for _ in atoms]
    for i, a in enumerate(atoms):
        if a.kind == CIRC:
            deps = _support(a.key, set(), s) | _support(Not(a.key), set(), s)
            last = max([i] + [index[d] for d in deps])
            checks[last].append(a)
    n = len(atoms)
    values = {}

    def dfs(i):
        if i == n:
            yield ChoiceAssignment(values)
            return
        for v in (0, 1):
            values[atoms[i]] = v
            if all(values[a] == 0 or _classical_ok(s, a, values) for a in checks[i]):
                yield from dfs(i + 1)
            del values[atoms[i]]

    yield from dfs(0)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counter: ChoiceAssignment = None


def entails_on_structure(s, premises, conclusion, cap=16):
    """Does ``premises ⊨ conclusion`` hold on ``s`` for every valuation?"""
    premises = list(premises)
    gp = [ground(s, p) for p in premises]
    gc = ground(s, conclusion)
    for choices in enumerate_valuations(s, premises + [conclusion], cap):
        ev = Evaluator(s, choices)
        if all(ev.value(p) for p in gp) and not ev.value(gc):
            return Verdict(False, choices)
    return Verdict(True)


# ------------------------------------------------------------ file formats

def _tuple_text(t):
    return "(" + " ".join(t) + ")"


def structure_to_text(s):
    parts = ["(structure", f" (domain {' '.join(s.domain)})"]
    if s.assign:
        parts.append(" (assign " + " ".join(f"({c} {d})" for c, d in sorted(s.assign.items())) + ")")
    for p in sorted(s.preds):
        i = s.preds[p]
        line = f" (pred {p}"
        for label, tuples in (("pos", i.pos), ("neg", i.neg)):
            if tuples:
                line += f" ({label} " + " ".join(_tuple_text(t) for t in sorted(tuples)) + ")"
        parts.append(line + ")")
    if s.identity_neg:
        parts.append(" (identity (neg " + " ".join(
            _tuple_text(t) for t in sorted(s.identity_neg)) + "))")
    return "\n".join(parts) + ")"


def parse_structure(text, source=None):
    node = read_one(text, source)
    line = line_of(node)

    def err(msg, n=None):
        return ParseError(msg, line_of(n, line) if n is not None else line, source)

    if not isinstance(node, SList) or not node or node[0] != "structure":
        raise err("expected (structure ...)")
    domain, assign, preds, idneg = None, {}, {}, set()

    def tuples(section):
        out = []
        for t in section[1:]:
            if not isinstance(t, SList) or any(isinstance(x, SList) for x in t):
                raise err("expected a tuple of element names like (d1 d2)", t)
            out.append(tuple(str(x) for x in t))
        return out

    for part in node[1:]:
        if not isinstance(part, SList) or not part:
            raise err("expected a (domain|assign|pred|identity ...) section", part)
        head = part[0]
        if head == "domain":
            if any(isinstance(x, SList) for x in part[1:]):
                raise err("domain elements must be names", part)
            domain = tuple(str(x) for x in part[1:])
        elif head == "assign":
            for pair in part[1:]:
                if not (isinstance(pair, SList) and len(pair) == 2
                        and all(isinstance(x, Sym) for x in pair)):
                    raise err("expected (CONSTANT ELEMENT) in assign", pair)
                assign[str(pair[0])] = str(pair[1])
        elif head == "pred":
            if len(part) < 2 or isinstance(part[1], SList):
                raise err("expected (pred NAME ...)", part)
            name = str(part[1])
            pos, neg = [], []
            for sec in part[2:]:
                if isinstance(sec, SList) and sec and sec[0] == "pos":
                    pos += tuples(sec)
                elif isinstance(sec, SList) and sec and sec[0] == "neg":
                    neg += tuples(sec)
                else:
                    raise err("expected (pos ...) or (neg ...)", sec)
            if name in preds:
                raise err(f"predicate {name} interpreted twice", part)
            try:
                preds[name] = PredInterp(pos, neg)
            except ValueError as e:
                raise err(str(e), part)
            arities = {len(t) for t in pos + neg}
            if len(arities) > 1:
                raise err(f"predicate {name} has tuples of different lengths", part)
        elif head == "identity":
            for sec in part[1:]:
                if isinstance(sec, SList) and sec and sec[0] == "neg":
                    for t in tuples(sec):
                        if len(t) != 2:
                            raise err("identity tuples must be pairs", sec)
                        idneg.add(t)
                else:
                    raise err("identity takes only a (neg ...) section", sec)
        else:
            raise err(f"unknown structure section {str(head)!r}", part)
    if domain is None:
        raise err("missing (domain ...)")
    s = Structure(domain, assign, preds, frozenset(idneg))
    try:
        validate_structure(s)
    except StructureError as e:
        raise err(str(e))
    return s


def choices_to_text(choices):
    if not choices:
        return "(choices)"
    return "(choices " + " ".join(
        f"({a.kind} {to_sexpr(a.key)} {v})" for a, v in choices.items()) + ")"


def parse_choices(text, source=None):
    node = read_one(text, source)
    line = line_of(node)
    if not isinstance(node, SList) or not node or node[0] != "choices":
        raise ParseError("expected (choices ...)", line, source)
    values = {}
    for entry in node[1:]:
        el = line_of(entry, line)
        if not (isinstance(entry, SList) and len(entry) == 3 and isinstance(entry[0], Sym)
                and str(entry[0]) in _KIND_ORDER and isinstance(entry[2], Sym)
                and str(entry[2]) in ("0", "1")):
            raise ParseError("expected (circ|negcirc|negbull FORMULA 0|1)", el, source)
        f = formula_from_sexpr(entry[1], None, allow_elements=True, source=source)
        require_sentence(f, el, source)
        if any(not (is_elem(t) or is_var(t)) for t in terms_of(f)):
            raise ParseError("choice formulas must use element names (#d) only", el, source)
        atom = _atom(str(entry[0]), f)
        v = int(entry[2])
        if values.get(atom, v) != v:
            raise ParseError(f"conflicting values for {atom}", el, source)
        values[atom] = v
    return ChoiceAssignment(values)
