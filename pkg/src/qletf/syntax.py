"""First-order syntax with the unary operators not, circ (classicality) and
bull (non-classicality), binary and/or, quantifiers and built-in identity.

Terms are plain strings: ``?x`` is a variable, ``#d1`` names a domain element
(the diagram-language constant for ``d1``), anything else is an individual
constant.  Formulas are immutable and hashable.
"""

from dataclasses import dataclass
from functools import lru_cache
import re

from .sexpr import ParseError, SList, Sym, line_of, read_all, read_one

VAR = "?"
ELEM = "#"
RESERVED = frozenset({"not", "and", "or", "circ", "bull", "forall", "exists", "="})
_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_'.\-]*$")


def is_var(t):
    return t.startswith(VAR)


def is_elem(t):
    return t.startswith(ELEM)


def is_const(t):
    return not (t.startswith(VAR) or t.startswith(ELEM))


def elem(name):
    return ELEM + name


def elem_name(t):
    return t[1:]


@dataclass(frozen=True)
class Signature:
    constants: tuple = ()
    predicates: tuple = ()  # (name, arity) pairs

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        preds = self.predicates
        if isinstance(preds, dict):
            preds = preds.items()
        object.__setattr__(self, "predicates", tuple((p, int(n)) for p, n in preds))
        names = list(self.constants) + [p for p, _ in self.predicates]
        if len(set(names)) != len(names):
            raise ValueError("signature names must be distinct")
        for c in self.constants:
            if not _NAME.match(c) or c in RESERVED:
                raise ValueError(f"bad constant name {c!r}")
        for p, n in self.predicates:
            if not _NAME.match(p) or p in RESERVED:
                raise ValueError(f"bad predicate name {p!r}")
            if n < 0:
                raise ValueError(f"negative arity for {p}")

    def arity(self, pred):
        for p, n in self.predicates:
            if p == pred:
                return n
        return None

    def has_constant(self, c):
        return c in self.constants

    def with_constants(self, names):
        extra = [c for c in names if c not in self.constants]
        if not extra:
            return self
        return Signature(self.constants + tuple(extra), self.predicates)

    def __str__(self):
        cs = " ".join(self.constants)
        ps = " ".join(f"({p} {n})" for p, n in self.predicates)
        return f"(signature (constants {cs}) (predicates {ps}))"


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_sexpr(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    pred: str
    args: tuple = ()

    def __repr__(self):
        return f"Atom({self})"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: str
    right: str

    def __repr__(self):
        return f"Eq({self})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula

    def __repr__(self):
        return f"Not({self})"


@dataclass(frozen=True, repr=False)
class Circ(Formula):
    body: Formula

    def __repr__(self):
        return f"Circ({self})"


@dataclass(frozen=True, repr=False)
class Bull(Formula):
    body: Formula

    def __repr__(self):
        return f"Bull({self})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self})"


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"Forall({self})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"Exists({self})"


UNARY = (Not, Circ, Bull)
BINARY = (And, Or)
QUANT = (Forall, Exists)

_UNARY_KW = {"not": Not, "circ": Circ, "bull": Bull}
_BINARY_KW = {"and": And, "or": Or}
_QUANT_KW = {"forall": Forall, "exists": Exists}
_KW_OF = {Not: "not", Circ: "circ", Bull: "bull", And: "and", Or: "or",
          Forall: "forall", Exists: "exists"}


# ---------------------------------------------------------------- printing

def to_sexpr(f):
    if isinstance(f, Atom):
        return "(" + " ".join((f.pred,) + f.args) + ")"
    if isinstance(f, Eq):
        return f"(= {f.left} {f.right})"
    if isinstance(f, UNARY):
        return f"({_KW_OF[type(f)]} {to_sexpr(f.body)})"
    if isinstance(f, BINARY):
        return f"({_KW_OF[type(f)]} {to_sexpr(f.left)} {to_sexpr(f.right)})"
    if isinstance(f, QUANT):
        return f"({_KW_OF[type(f)]} {f.var} {to_sexpr(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


_PRETTY = {Not: "¬", Circ: "∘", Bull: "•"}


def pretty(f):
    """Human-oriented infix rendering (output only; not parseable)."""
    def term(t):
        return t[1:] if is_var(t) else t
    if isinstance(f, Atom):
        return f.pred + ("(" + ", ".join(map(term, f.args)) + ")" if f.args else "")
    if isinstance(f, Eq):
        return f"{term(f.left)} ≐ {term(f.right)}"
    if isinstance(f, UNARY):
        inner = pretty(f.body)
        if isinstance(f.body, BINARY) or (isinstance(f.body, Eq)):
            inner = f"({inner})"
        return _PRETTY[type(f)] + inner
    if isinstance(f, BINARY):
        op = " ∧ " if isinstance(f, And) else " ∨ "
        parts = []
        for sub in (f.left, f.right):
            s = pretty(sub)
            parts.append(f"({s})" if isinstance(sub, BINARY) else s)
        return op.join(parts)
    if isinstance(f, QUANT):
        q = "∀" if isinstance(f, Forall) else "∃"
        body = pretty(f.body)
        if isinstance(f.body, BINARY):
            body = f"({body})"
        return f"{q}{term(f.var)} {body}"
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------------------ parsing

def _check_term(tok, sig, allow_elements, new_constants):
    line = line_of(tok)
    if isinstance(tok, SList):
        raise ParseError("expected a term, got a list", line)
    t = str(tok)
    if is_var(t):
        if not _NAME.match(t[1:]):
            raise ParseError(f"bad variable name {t!r}", line)
        return t
    if is_elem(t):
        if not allow_elements:
            raise ParseError(f"element name {t!r} not allowed here", line)
        if not _NAME.match(t[1:]):
            raise ParseError(f"bad element name {t!r}", line)
        return t
    if not _NAME.match(t) or t in RESERVED:
        raise ParseError(f"lexical error: bad term {t!r}", line)
    if sig is not None and not sig.has_constant(t):
        if new_constants is None:
            raise ParseError(f"unknown constant {t!r}", line)
        if t not in new_constants:
            new_constants.append(t)
    return t


def _build(node, sig, allow_elements, new_constants, arities):
    line = line_of(node)
    if isinstance(node, Sym):
        name = str(node)
        if name in RESERVED or not _NAME.match(name):
            raise ParseError(f"lexical error: unexpected token {name!r}", line)
        _check_pred(name, 0, sig, arities, line)
        return Atom(name, ())
    if not node:
        raise ParseError("empty formula '()'", line)
    head = node[0]
    if isinstance(head, SList):
        raise ParseError("formula head must be a symbol", line)
    head = str(head)
    args = node[1:]

    def sub(n):
        return _build(n, sig, allow_elements, new_constants, arities)

    if head in _UNARY_KW:
        if len(args) != 1:
            raise ParseError(f"'{head}' takes exactly one formula", line)
        return _UNARY_KW[head](sub(args[0]))
    if head in _BINARY_KW:
        if len(args) != 2:
            raise ParseError(f"'{head}' takes exactly two formulas", line)
        return _BINARY_KW[head](sub(args[0]), sub(args[1]))
    if head in _QUANT_KW:
        if len(args) != 2 or isinstance(args[0], SList) or not is_var(str(args[0])):
            raise ParseError(f"'{head}' expects a variable and a formula", line)
        var = _check_term(args[0], sig, allow_elements, new_constants)
        body = sub(args[1])
        if var not in free_vars(body):
            raise ParseError(f"void quantifier: {var} does not occur free in its scope", line)
        return _QUANT_KW[head](var, body)
    if head == "=":
        if len(args) != 2:
            raise ParseError("'=' takes exactly two terms", line)
        return Eq(*(_check_term(a, sig, allow_elements, new_constants) for a in args))
    if head in RESERVED or not _NAME.match(head) or is_var(head) or is_elem(head):
        raise ParseError(f"lexical error: bad predicate {head!r}", line)
    _check_pred(head, len(args), sig, arities, line)
    return Atom(head, tuple(_check_term(a, sig, allow_elements, new_constants) for a in args))


def _check_pred(name, n, sig, arities, line):
    if sig is not None:
        want = sig.arity(name)
        if want is None:
            raise ParseError(f"unknown predicate {name!r}", line)
        if want != n:
            raise ParseError(f"arity mismatch: {name} expects {want} argument(s), got {n}", line)
    elif arities is not None:
        want = arities.setdefault(name, n)
        if want != n:
            raise ParseError(f"arity mismatch: {name} used with {want} and {n} argument(s)", line)


def formula_from_sexpr(node, sig=None, *, allow_elements=False, new_constants=None,
                       arities=None, source=None):
    """Build a formula from an already-read s-expression.

    With ``sig=None`` predicates and constants are unchecked, except that
    ``arities`` (if given) records and enforces consistent arities.  When
    ``new_constants`` is a list, constants missing from ``sig`` are appended to
    it instead of being rejected.
    """
    try:
        return _build(node, sig, allow_elements, new_constants, arities)
    except ParseError as e:
        raise e.located(source, line_of(node))


def parse_formula(text, sig=None, *, allow_elements=False, new_constants=None,
                  arities=None, source=None):
    node = read_one(text, source)
    return formula_from_sexpr(node, sig, allow_elements=allow_elements,
                              new_constants=new_constants, arities=arities, source=source)


def require_sentence(f, line=None, source=None):
    fv = free_vars(f)
    if fv:
        raise ParseError(
            f"unbound variable(s) {', '.join(sorted(fv))}: a sentence must be closed",
            line, source)
    return f


def parse_sentence(text, sig=None, **kw):
    f = parse_formula(text, sig, **kw)
    return require_sentence(f, source=kw.get("source"))


def parse_formula_list(text, sig=None, *, source=None, **kw):
    """Parse one sentence per top-level expression (the list-file format)."""
    out = []
    for node in read_all(text, source):
        f = formula_from_sexpr(node, sig, source=source, **kw)
        require_sentence(f, line_of(node), source)
        out.append(f)
    return out


def parse_signature(text, source=None):
    node = read_one(text, source)
    line = line_of(node)
    if not isinstance(node, SList) or not node or node[0] != "signature":
        raise ParseError("expected (signature ...)", line, source)
    constants, predicates = [], []
    for part in node[1:]:
        pl = line_of(part, line)
        if not isinstance(part, SList) or not part:
            raise ParseError("expected (constants ...) or (predicates ...)", pl, source)
        if part[0] == "constants":
            for c in part[1:]:
                if isinstance(c, SList):
                    raise ParseError("constant names must be symbols", pl, source)
                constants.append(str(c))
        elif part[0] == "predicates":
            for p in part[1:]:
                if not (isinstance(p, SList) and len(p) == 2 and isinstance(p[0], Sym)
                        and isinstance(p[1], Sym) and p[1].isdigit()):
                    raise ParseError("expected (NAME ARITY) in predicates", line_of(p, pl), source)
                predicates.append((str(p[0]), int(p[1])))
        else:
            raise ParseError(f"unknown signature section {str(part[0])!r}", pl, source)
    try:
        return Signature(tuple(constants), tuple(predicates))
    except ValueError as e:
        raise ParseError(str(e), line, source)


def infer_signature(formulas, base=None):
    """Smallest signature (extending ``base``) covering ``formulas``."""
    constants = list(base.constants) if base else []
    preds = dict(base.predicates) if base else {}
    for f in formulas:
        for p, n in predicates_of(f):
            if preds.setdefault(p, n) != n:
                raise ParseError(f"arity mismatch: {p} used with {preds[p]} and {n} argument(s)")
        for c in sorted(constants_of(f)):
            if c not in constants:
                constants.append(c)
    return Signature(tuple(constants), tuple(preds.items()))


# ------------------------------------------------------------ inspection

def terms_of(f):
    if isinstance(f, Atom):
        yield from f.args
    elif isinstance(f, Eq):
        yield f.left
        yield f.right
    elif isinstance(f, UNARY):
        yield from terms_of(f.body)
    elif isinstance(f, BINARY):
        yield from terms_of(f.left)
        yield from terms_of(f.right)
    elif isinstance(f, QUANT):
        yield from terms_of(f.body)


@lru_cache(maxsize=65536)
def free_vars(f):
    if isinstance(f, Atom):
        return frozenset(t for t in f.args if is_var(t))
    if isinstance(f, Eq):
        return frozenset(t for t in (f.left, f.right) if is_var(t))
    if isinstance(f, UNARY):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANT):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def constants_of(f):
    return frozenset(t for t in terms_of(f) if is_const(t))


def elements_of(f):
    return frozenset(t for t in terms_of(f) if is_elem(t))


def predicates_of(f):
    """Set of (name, arity) for non-identity atoms."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add((g.pred, len(g.args)))
        elif isinstance(g, UNARY) or isinstance(g, QUANT):
            stack.append(g.body)
        elif isinstance(g, BINARY):
            stack.extend((g.left, g.right))
    return out


def has_identity(f):
    if isinstance(f, Eq):
        return True
    if isinstance(f, (Atom,)):
        return False
    if isinstance(f, BINARY):
        return has_identity(f.left) or has_identity(f.right)
    return has_identity(f.body)


def is_circ_free(f):
    """True iff neither circ nor bull occurs in ``f``."""
    if isinstance(f, (Atom, Eq)):
        return True
    if isinstance(f, (Circ, Bull)):
        return False
    if isinstance(f, BINARY):
        return is_circ_free(f.left) and is_circ_free(f.right)
    return is_circ_free(f.body)


def size(f):
    if isinstance(f, (Atom, Eq)):
        return 1
    if isinstance(f, BINARY):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


# ----------------------------------------------------------- substitution

def substitute(f, x, t):
    """Replace the free occurrences of variable ``x`` in ``f`` by ``t``.

    ``t`` is a constant or element name, so no capture is possible.
    """
    if x not in free_vars(f):
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(t if a == x else a for a in f.args))
    if isinstance(f, Eq):
        return Eq(t if f.left == x else f.left, t if f.right == x else f.right)
    if isinstance(f, UNARY):
        return type(f)(substitute(f.body, x, t))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, x, t), substitute(f.right, x, t))
    # quantifier binding x cannot reach here: x would not be free
    return type(f)(f.var, substitute(f.body, x, t))


def map_terms(f, fn):
    """Apply ``fn`` to every non-variable term occurrence."""
    def m(t):
        return t if is_var(t) else fn(t)
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(m(a) for a in f.args))
    if isinstance(f, Eq):
        return Eq(m(f.left), m(f.right))
    if isinstance(f, UNARY):
        return type(f)(map_terms(f.body, fn))
    if isinstance(f, BINARY):
        return type(f)(map_terms(f.left, fn), map_terms(f.right, fn))
    return type(f)(f.var, map_terms(f.body, fn))


def match_instance(pattern, x, inst):
    """Find ``t`` with ``substitute(pattern, x, t) == inst``.

    Returns the term, ``None`` when ``x`` is not free in ``pattern`` and the
    formulas are equal, or raises ``LookupError`` when no such term exists.
    """
    found = []

    def walk(p, q, bound):
        if type(p) is not type(q):
            return False
        if isinstance(p, (Atom, Eq)):
            if isinstance(p, Atom):
                if p.pred != q.pred or len(p.args) != len(q.args):
                    return False
                pairs = zip(p.args, q.args)
            else:
                pairs = ((p.left, q.left), (p.right, q.right))
            for a, b in pairs:
                if a == x and x not in bound:
                    if is_var(b):
                        return False
                    if found and found[0] != b:
                        return False
                    if not found:
                        found.append(b)
                elif a != b:
                    return False
            return True
        if isinstance(p, UNARY):
            return walk(p.body, q.body, bound)
        if isinstance(p, BINARY):
            return walk(p.left, q.left, bound) and walk(p.right, q.right, bound)
        if p.var != q.var:
            return False
        return walk(p.body, q.body, bound | {p.var})

    if not walk(pattern, inst, frozenset()):
        raise LookupError("no instance")
    return found[0] if found else None


# ------------------------------------------------------- alphabetic variants

def _debruijn(f, env=()):
    """Nameless form: bound variables become binder distances."""
    def term(t):
        if is_var(t):
            for i, v in enumerate(reversed(env)):
                if v == t:
                    return ("bound", i)
            return ("free", t)
        return ("term", t)
    if isinstance(f, Atom):
        return ("atom", f.pred, tuple(term(a) for a in f.args))
    if isinstance(f, Eq):
        return ("eq", term(f.left), term(f.right))
    if isinstance(f, UNARY):
        return (_KW_OF[type(f)], _debruijn(f.body, env))
    if isinstance(f, BINARY):
        return (_KW_OF[type(f)], _debruijn(f.left, env), _debruijn(f.right, env))
    return (_KW_OF[type(f)], _debruijn(f.body, env + (f.var,)))


def alphabetic_variant_eq(f, g):
    """True iff ``g`` is ``f`` with bound variables renamed, binding kept."""
    return _debruijn(f) == _debruijn(g)


@lru_cache(maxsize=65536)
def rename_bound(f):
    """Rename binders to ``?_0, ?_1, ...`` in left-to-right binder order."""
    counter = [0]

    def go(g, env):
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(env.get(a, a) for a in g.args))
        if isinstance(g, Eq):
            return Eq(env.get(g.left, g.left), env.get(g.right, g.right))
        if isinstance(g, UNARY):
            return type(g)(go(g.body, env))
        if isinstance(g, BINARY):
            left = go(g.left, env)
            return type(g)(left, go(g.right, env))
        name = f"{VAR}_{counter[0]}"
        counter[0] += 1
        return type(g)(name, go(g.body, {**env, g.var: name}))

    return go(f, {})


def canonicalize(s, assign):
    """Canonical key of a sentence: constants replaced by the elements they
    denote (``assign`` maps constant -> element name), binders renamed."""
    def denote(t):
        if is_elem(t):
            return t
        try:
            return ELEM + assign[t]
        except KeyError:
            raise KeyError(f"unmapped constant {t!r}") from None
    return rename_bound(map_terms(s, denote))
