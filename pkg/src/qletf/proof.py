"""Natural-deduction derivations and their checker.

A derivation is a tree of :class:`Premise` and :class:`Hyp` leaves and
:class:`Infer` nodes.  :func:`check_derivation` verifies every node against
its rule schema, the discharge bookkeeping, the eigenconstant side
conditions and the vocabulary of a :class:`RuleProfile`.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .semantics import E1, E1E2, E2, NONE
from .sexpr import ParseError, SList, Sym, line_of, read_one
from .syntax import (
    And, Atom, Bull, Circ, Eq, Exists, Forall, Not, Or,
    alphabetic_variant_eq, constants_of, formula_from_sexpr, infer_signature,
    is_circ_free, is_const, match_instance, predicates_of, require_sentence,
    substitute, to_sexpr,
)


class RuleId(Enum):
    AndI = "and-i"
    AndE_L = "and-e-l"
    AndE_R = "and-e-r"
    OrI_L = "or-i-l"
    OrI_R = "or-i-r"
    OrE = "or-e"
    NegAndI_L = "neg-and-i-l"
    NegAndI_R = "neg-and-i-r"
    NegAndE = "neg-and-e"
    NegOrI = "neg-or-i"
    NegOrE_L = "neg-or-e-l"
    NegOrE_R = "neg-or-e-r"
    DN_I = "dn-i"
    DN_E = "dn-e"
    ExpCirc = "exp-circ"
    PemCirc = "pem-circ"
    Cons = "cons"
    Comp = "comp"
    ForallI = "forall-i"
    ForallI_Prime = "forall-i-prime"
    ForallE = "forall-e"
    ExistsI = "exists-i"
    ExistsE = "exists-e"
    NegForallI = "neg-forall-i"
    NegForallE = "neg-forall-e"
    NegExistsI = "neg-exists-i"
    NegExistsE = "neg-exists-e"
    IdI = "id-i"
    IdE = "id-e"
    AV = "av"
    PEM = "pem"
    EXP = "exp"

    def __str__(self):
        return self.value


R = RuleId

# index of the children whose hypotheses a discharging rule may close
DISCHARGING = {R.OrE: (1, 2), R.NegAndE: (1, 2), R.ExistsE: (1,), R.NegForallE: (1,)}

ARITY = {
    R.AndI: 2, R.AndE_L: 1, R.AndE_R: 1, R.OrI_L: 1, R.OrI_R: 1, R.OrE: 3,
    R.NegAndI_L: 1, R.NegAndI_R: 1, R.NegAndE: 3, R.NegOrI: 2, R.NegOrE_L: 1,
    R.NegOrE_R: 1, R.DN_I: 1, R.DN_E: 1, R.ExpCirc: 3, R.PemCirc: 1, R.Cons: 2,
    R.Comp: 0, R.ForallI: 1, R.ForallI_Prime: 1, R.ForallE: 1, R.ExistsI: 1,
    R.ExistsE: 2, R.NegForallI: 1, R.NegForallE: 2, R.NegExistsI: 1,
    R.NegExistsE: 1, R.IdI: 0, R.IdE: 2, R.AV: 1, R.PEM: 0, R.EXP: 2,
}


@dataclass(frozen=True)
class RuleProfile:
    name: str
    rules: frozenset
    constraint: str = NONE
    circ_allowed: bool = True


_QLETF_RULES = frozenset(R) - {R.ForallI_Prime, R.PEM, R.EXP}
_QFDE_RULES = _QLETF_RULES - {R.ExpCirc, R.PemCirc, R.Cons, R.Comp, R.AV}

PROFILES = {
    "qletf": RuleProfile("qletf", _QLETF_RULES, NONE, True),
    "qfde": RuleProfile("qfde", _QFDE_RULES, NONE, False),
    "qk3": RuleProfile("qk3", _QFDE_RULES | {R.EXP}, E2, False),
    "qlp": RuleProfile("qlp", _QFDE_RULES | {R.PEM}, E1, False),
    "qcl": RuleProfile("qcl", _QFDE_RULES | {R.PEM, R.EXP}, E1E2, False),
    "qfde-prime": RuleProfile(
        "qfde-prime", (_QFDE_RULES - {R.ForallI}) | {R.ForallI_Prime}, NONE, False),
}


def get_profile(name):
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r} (choose from {', '.join(PROFILES)})") from None


# -------------------------------------------------------------- derivations

@dataclass(frozen=True)
class Premise:
    sentence: object

    @property
    def conclusion(self):
        return self.sentence


@dataclass(frozen=True)
class Hyp:
    label: str
    sentence: object

    @property
    def conclusion(self):
        return self.sentence


@dataclass(frozen=True)
class Infer:
    rule: RuleId
    conclusion: object
    children: tuple = ()
    discharges: frozenset = frozenset()
    const: str = None
    var: str = None
    line: int = field(default=None, compare=False)


def premise(f):
    return Premise(f)


def hyp(label, f):
    return Hyp(str(label), f)


def infer(rule, conclusion, *children, discharge=(), const=None, var=None):
    if isinstance(rule, str):
        rule = RuleId(rule)
    return Infer(rule, conclusion, tuple(children), frozenset(map(str, discharge)), const, var)


def _open_leaves(d):
    """Undischarged leaves (Premise or Hyp) of ``d``, left to right."""
    if isinstance(d, (Premise, Hyp)):
        return [d]
    out = []
    minors = DISCHARGING.get(d.rule, ())
    for i, child in enumerate(d.children):
        leaves = _open_leaves(child)
        if i in minors and d.discharges:
            leaves = [l for l in leaves if not (isinstance(l, Hyp) and l.label in d.discharges)]
        out += leaves
    return out


def open_hypotheses(d):
    """Multiset of open assumptions as ``(label, sentence)`` pairs; premises
    carry label ``None``."""
    return Counter((l.label if isinstance(l, Hyp) else None, l.sentence) for l in _open_leaves(d))


def sentences_of(d):
    yield d.conclusion
    if isinstance(d, Infer):
        for c in d.children:
            yield from sentences_of(c)


# ----------------------------------------------------------------- checking

class RuleViolation(Exception):
    pass


@dataclass(frozen=True)
class NodeStatus:
    path: tuple
    rule: str
    ok: bool
    message: str = ""


@dataclass
class CheckReport:
    accepted: bool
    nodes: list
    open_assumptions: Counter
    failure: NodeStatus = None

    @property
    def verdict(self):
        return "accepted" if self.accepted else "rejected"

    def premises(self):
        return [s for (label, s), n in self.open_assumptions.items() if label is None for _ in range(n)]

    def text(self):
        lines = [self.verdict]
        if self.failure is not None:
            f = self.failure
            lines.append(f"at node {_path_text(f.path)} ({f.rule}): {f.message}")
        for (label, s), n in sorted(self.open_assumptions.items(),
                                    key=lambda kv: (kv[0][0] is not None, str(kv[0][0]), to_sexpr(kv[0][1]))):
            what = "premise" if label is None else f"open hypothesis [{label}]"
            for _ in range(n):
                lines.append(f"{what}: {to_sexpr(s)}")
        return "\n".join(lines)

    def porcelain(self):
        lines = [f"verdict:{self.verdict}"]
        for st in self.nodes:
            rec = [f"path:{_path_text(st.path)}", f"rule:{st.rule}", f"status:{'ok' if st.ok else 'fail'}"]
            if st.message:
                rec.append(f"message:{st.message}")
            lines.append("\t".join(rec))
        for (label, s), n in self.open_assumptions.items():
            for _ in range(n):
                lines.append(f"open:{'premise' if label is None else label}\tsentence:{to_sexpr(s)}")
        return "\n".join(lines)


def _path_text(path):
    return "root" if not path else "root." + ".".join(map(str, path))


def check_derivation(d, profile, sig=None):
    """Check ``d`` under ``profile`` (a :class:`RuleProfile` or its name).

    ``sig`` is optional: when given, predicates must match it; constants
    are auto-declared since the quantifier rules need fresh ones.
    """
    if isinstance(profile, str):
        profile = get_profile(profile)
    nodes = []
    _walk(d, (), profile, sig, nodes)
    failure = next((n for n in nodes if not n.ok), None)
    opened = open_hypotheses(d)
    if failure is None:
        dangling = [(l, s) for (l, s) in opened if l is not None]
        if dangling:
            l, s = dangling[0]
            failure = NodeStatus((), _rule_name(d), False,
                                 f"hypothesis [{l}] {to_sexpr(s)} is never discharged")
    return CheckReport(failure is None, nodes, opened, failure)


def _rule_name(d):
    if isinstance(d, Infer):
        return str(d.rule)
    return "premise" if isinstance(d, Premise) else "hyp"


def _walk(d, path, profile, sig, nodes):
    if isinstance(d, Infer):
        for i, c in enumerate(d.children):
            _walk(c, path + (i,), profile, sig, nodes)
    try:
        _check_vocabulary(d, profile, sig)
        if isinstance(d, Infer):
            _check_node(d, profile)
    except RuleViolation as e:
        nodes.append(NodeStatus(path, _rule_name(d), False, str(e)))
    else:
        nodes.append(NodeStatus(path, _rule_name(d), True))


def _check_vocabulary(d, profile, sig):
    f = d.conclusion
    if not profile.circ_allowed and not is_circ_free(f):
        raise RuleViolation(
            f"vocabulary violation: circ/bull not available in {profile.name}: {to_sexpr(f)}")
    if sig is not None:
        for p, n in predicates_of(f):
            want = sig.arity(p)
            if want is None:
                raise RuleViolation(f"unknown predicate {p}")
            if want != n:
                raise RuleViolation(f"arity mismatch: {p} expects {want} argument(s)")


def _need(cond, msg):
    if not cond:
        raise RuleViolation(msg)


def _is(f, cls, what):
    if not isinstance(f, cls):
        raise RuleViolation(f"schema mismatch: expected {what}, got {to_sexpr(f)}")
    return f


def _instance_const(pattern, x, inst, what):
    try:
        c = match_instance(pattern, x, inst)
    except LookupError:
        raise RuleViolation(
            f"schema mismatch: {to_sexpr(inst)} is not an instance of {to_sexpr(pattern)} for {x}") from None
    # x is free in pattern (no void quantifiers), so c is not None
    _need(c is not None and is_const(c), f"schema mismatch: {what} must instantiate {x} by a constant")
    return c


def _check_annotations(node, c=None, x=None):
    if node.const is not None and c is not None:
        _need(node.const == c, f"annotation :const {node.const} disagrees with the instance constant {c}")
    if node.var is not None and x is not None:
        _need(node.var == x, f"annotation :var {node.var} disagrees with the bound variable {x}")


def _eigen(c, places, leaves, rule):
    """Side condition: ``c`` occurs in no formula of ``places`` (named) and
    in no open assumption in ``leaves``."""
    for name, f in places:
        _need(c not in constants_of(f),
              f"eigenconstant violation: {c} occurs in {name} {to_sexpr(f)} ({rule})")
    for leaf in leaves:
        if c in constants_of(leaf.sentence):
            what = "premise" if isinstance(leaf, Premise) else f"open hypothesis [{leaf.label}]"
            raise RuleViolation(
                f"eigenconstant violation: {c} occurs in {what} {to_sexpr(leaf.sentence)} ({rule})")


def _discharged(node, child_index):
    return [l for l in _open_leaves(node.children[child_index])
            if isinstance(l, Hyp) and l.label in node.discharges]


def _require_discharge_match(node, child_index, expected):
    for h in _discharged(node, child_index):
        _need(h.sentence == expected,
              f"discharged hypothesis [{h.label}] {to_sexpr(h.sentence)} does not match "
              f"{to_sexpr(expected)}")


def _check_node(d, profile):
    rule = d.rule
    _need(rule in profile.rules, f"rule {rule} is not available in profile {profile.name}")
    n = ARITY[rule]
    _need(len(d.children) == n, f"{rule} takes {n} premise(s), got {len(d.children)}")
    if d.discharges and rule not in DISCHARGING:
        raise RuleViolation(f"{rule} discharges no hypotheses (labels {sorted(d.discharges)} given)")
    if rule not in _QUANT_RULES:
        _need(d.const is None and d.var is None, f"{rule} takes no :const/:var annotation")
    ps = [c.conclusion for c in d.children]
    concl = d.conclusion
    _RULES[rule](d, ps, concl)


def _and_i(d, ps, c):
    _need(c == And(ps[0], ps[1]), "schema mismatch: conclusion must be the conjunction of the premises")


def _and_e(side):
    def check(d, ps, c):
        a = _is(ps[0], And, "a conjunction")
        _need(c == (a.left if side == 0 else a.right), "schema mismatch: conclusion is not the selected conjunct")
    return check


def _or_i(side):
    def check(d, ps, c):
        o = _is(c, Or, "a disjunction")
        _need((o.left if side == 0 else o.right) == ps[0], "schema mismatch: premise is not the selected disjunct")
    return check


def _case_split(d, ps, c, first, second):
    _need(ps[1] == c and ps[2] == c, "schema mismatch: both case branches must conclude the conclusion")
    _require_discharge_match(d, 1, first)
    _require_discharge_match(d, 2, second)


def _or_e(d, ps, c):
    o = _is(ps[0], Or, "a disjunction as major premise")
    _case_split(d, ps, c, o.left, o.right)


def _neg_and_i(side):
    def check(d, ps, c):
        a = _is(_is(c, Not, "a negated conjunction").body, And, "a negated conjunction")
        _need(ps[0] == Not(a.left if side == 0 else a.right),
              "schema mismatch: premise must negate the selected conjunct")
    return check


def _neg_and_e(d, ps, c):
    a = _is(_is(ps[0], Not, "a negated conjunction").body, And, "a negated conjunction as major premise")
    _case_split(d, ps, c, Not(a.left), Not(a.right))


def _neg_or_i(d, ps, c):
    o = _is(_is(c, Not, "a negated disjunction").body, Or, "a negated disjunction")
    _need(ps[0] == Not(o.left) and ps[1] == Not(o.right),
          "schema mismatch: premises must be the negated disjuncts")


def _neg_or_e(side):
    def check(d, ps, c):
        o = _is(_is(ps[0], Not, "a negated disjunction").body, Or, "a negated disjunction")
        _need(c == Not(o.left if side == 0 else o.right),
              "schema mismatch: conclusion must negate the selected disjunct")
    return check


def _dn_i(d, ps, c):
    _need(c == Not(Not(ps[0])), "schema mismatch: conclusion must be the double negation of the premise")


def _dn_e(d, ps, c):
    _need(ps[0] == Not(Not(c)), "schema mismatch: premise must be the double negation of the conclusion")


def _exp_circ(d, ps, c):
    a = _is(ps[0], Circ, "circ A as first premise").body
    _need(ps[1] == a and ps[2] == Not(a), "schema mismatch: premises must be circ A, A, not A")


def _pem_circ(d, ps, c):
    a = _is(ps[0], Circ, "circ A").body
    _need(c == Or(a, Not(a)), "schema mismatch: conclusion must be (or A (not A))")


def _cons(d, ps, c):
    a = _is(ps[0], Circ, "circ A as first premise").body
    _need(ps[1] == Bull(a), "schema mismatch: premises must be circ A and bull A")


def _comp(d, ps, c):
    o = _is(c, Or, "(or (circ A) (bull A))")
    l = _is(o.left, Circ, "(or (circ A) (bull A))")
    r = _is(o.right, Bull, "(or (circ A) (bull A))")
    _need(l.body == r.body, "schema mismatch: comp needs the same A under circ and bull")


def _forall_i(d, ps, c):
    o = _is(c, Or, "a conclusion B ∨ ∀xA")
    q = _is(o.right, Forall, "a conclusion B ∨ ∀xA")
    p = _is(ps[0], Or, "a premise B ∨ A(c/x)")
    _need(p.left == o.left, "schema mismatch: premise and conclusion must share the left disjunct B")
    k = _instance_const(q.body, q.var, p.right, "the premise")
    _check_annotations(d, k, q.var)
    _eigen(k, [("A", q), ("B", o.left)], _open_leaves(d.children[0]), R.ForallI)


def _forall_i_prime(d, ps, c):
    q = _is(c, Forall, "a universal conclusion")
    k = _instance_const(q.body, q.var, ps[0], "the premise")
    _check_annotations(d, k, q.var)
    _eigen(k, [("A", q)], _open_leaves(d.children[0]), R.ForallI_Prime)


def _forall_e(d, ps, c):
    q = _is(ps[0], Forall, "a universal premise")
    k = _instance_const(q.body, q.var, c, "the conclusion")
    _check_annotations(d, k, q.var)


def _exists_i(d, ps, c):
    q = _is(c, Exists, "an existential conclusion")
    k = _instance_const(q.body, q.var, ps[0], "the premise")
    _check_annotations(d, k, q.var)


def _witness_elim(d, ps, c, q, negated, rule):
    _need(ps[1] == c, "schema mismatch: minor premise must equal the conclusion")
    hyps = _discharged(d, 1)
    k = d.const
    if k is None and hyps:
        target = hyps[0].sentence
        if negated:
            target = _is(target, Not, "a negated instance as discharged hypothesis").body
        k = _instance_const(q.body, q.var, target, "the discharged hypothesis")
    _check_annotations(d, None, q.var)
    if k is None:
        return  # vacuous discharge: no witness is ever used
    _need(is_const(k), f"eigenconstant {k} must be a constant")
    inst = substitute(q.body, q.var, k)
    _require_discharge_match(d, 1, Not(inst) if negated else inst)
    others = [l for l in _open_leaves(d.children[1])
              if not (isinstance(l, Hyp) and l.label in d.discharges)]
    _eigen(k, [("A", q), ("C", c)], others, rule)


def _exists_e(d, ps, c):
    q = _is(ps[0], Exists, "an existential major premise")
    _witness_elim(d, ps, c, q, False, R.ExistsE)


def _neg_forall_e(d, ps, c):
    q = _is(_is(ps[0], Not, "a negated universal major premise").body, Forall,
            "a negated universal major premise")
    _witness_elim(d, ps, c, q, True, R.NegForallE)


def _neg_forall_i(d, ps, c):
    q = _is(_is(c, Not, "a negated universal").body, Forall, "a negated universal conclusion")
    inst = _is(ps[0], Not, "a negated instance").body
    k = _instance_const(q.body, q.var, inst, "the premise")
    _check_annotations(d, k, q.var)


def _neg_exists_i(d, ps, c):
    q = _is(_is(c, Not, "a negated existential").body, Exists, "a negated existential conclusion")
    inst = _is(ps[0], Not, "a negated instance").body
    k = _instance_const(q.body, q.var, inst, "the premise")
    _check_annotations(d, k, q.var)
    _eigen(k, [("A", q)], _open_leaves(d.children[0]), R.NegExistsI)


def _neg_exists_e(d, ps, c):
    q = _is(_is(ps[0], Not, "a negated existential").body, Exists, "a negated existential premise")
    inst = _is(c, Not, "a negated instance").body
    k = _instance_const(q.body, q.var, inst, "the conclusion")
    _check_annotations(d, k, q.var)


def _id_i(d, ps, c):
    e = _is(c, Eq, "an identity c = c")
    _need(e.left == e.right and is_const(e.left), "schema mismatch: id-i concludes (= c c)")


def rewrites(src, dst, c1, c2):
    """True iff ``dst`` is ``src`` with some occurrences of ``c1`` replaced
    by ``c2`` (i.e. src = A(c1/x), dst = A(c2/x) for some A, x)."""
    def term(a, b):
        return a == b or (a == c1 and b == c2)

    def walk(p, q):
        if type(p) is not type(q):
            return False
        if isinstance(p, Eq):
            return term(p.left, q.left) and term(p.right, q.right)
        if isinstance(p, Atom):
            return (p.pred == q.pred and len(p.args) == len(q.args)
                    and all(term(a, b) for a, b in zip(p.args, q.args)))
        if isinstance(p, (Not, Circ, Bull)):
            return walk(p.body, q.body)
        if isinstance(p, (And, Or)):
            return walk(p.left, q.left) and walk(p.right, q.right)
        return p.var == q.var and walk(p.body, q.body)

    return walk(src, dst)


def _id_e(d, ps, c):
    e = _is(ps[0], Eq, "an identity c1 = c2 as first premise")
    _need(rewrites(ps[1], c, e.left, e.right),
          f"schema mismatch: conclusion is not the minor premise with occurrences of "
          f"{e.left} replaced by {e.right}")


def _av(d, ps, c):
    _need(alphabetic_variant_eq(ps[0], c), "schema mismatch: conclusion is not an alphabetic variant of the premise")


def _pem(d, ps, c):
    o = _is(c, Or, "(or A (not A))")
    _need(o.right == Not(o.left), "schema mismatch: pem concludes (or A (not A))")


def _exp(d, ps, c):
    _need(ps[1] == Not(ps[0]), "schema mismatch: exp needs premises A and (not A)")


_RULES = {
    R.AndI: _and_i, R.AndE_L: _and_e(0), R.AndE_R: _and_e(1),
    R.OrI_L: _or_i(0), R.OrI_R: _or_i(1), R.OrE: _or_e,
    R.NegAndI_L: _neg_and_i(0), R.NegAndI_R: _neg_and_i(1), R.NegAndE: _neg_and_e,
    R.NegOrI: _neg_or_i, R.NegOrE_L: _neg_or_e(0), R.NegOrE_R: _neg_or_e(1),
    R.DN_I: _dn_i, R.DN_E: _dn_e, R.ExpCirc: _exp_circ, R.PemCirc: _pem_circ,
    R.Cons: _cons, R.Comp: _comp, R.ForallI: _forall_i, R.ForallI_Prime: _forall_i_prime,
    R.ForallE: _forall_e, R.ExistsI: _exists_i, R.ExistsE: _exists_e,
    R.NegForallI: _neg_forall_i, R.NegForallE: _neg_forall_e, R.NegExistsI: _neg_exists_i,
    R.NegExistsE: _neg_exists_e, R.IdI: _id_i, R.IdE: _id_e, R.AV: _av, R.PEM: _pem, R.EXP: _exp,
}

_QUANT_RULES = {R.ForallI, R.ForallI_Prime, R.ForallE, R.ExistsI, R.ExistsE, R.NegForallI,
                R.NegForallE, R.NegExistsI, R.NegExistsE}


# ------------------------------------------------------------- proof files

def parse_proof(text, sig=None, source=None):
    """Parse a proof term.  Returns ``(derivation, signature)`` where the
    signature is ``sig`` extended with any constants the proof introduces
    (or inferred from the proof when ``sig`` is None)."""
    node = read_one(text, source)
    new_constants = [] if sig is not None else None
    arities = {} if sig is None else None
    d = _proof_from(node, sig, new_constants, arities, source)
    if sig is None:
        out_sig = infer_signature(sentences_of(d))
    else:
        out_sig = sig.with_constants(new_constants)
    return d, out_sig


def _proof_from(node, sig, new_constants, arities, source):
    line = line_of(node)

    def err(msg, n=None):
        return ParseError(msg, line_of(n, line) if n is not None else line, source)

    def sentence(n):
        f = formula_from_sexpr(n, sig, new_constants=new_constants, arities=arities, source=source)
        return require_sentence(f, line_of(n, line), source)

    if not isinstance(node, SList) or not node or isinstance(node[0], SList):
        raise err("expected (premise F), (hyp LABEL F) or (infer RULE F ...)")
    head = str(node[0])
    if head == "premise":
        if len(node) != 2:
            raise err("expected (premise F)")
        return Premise(sentence(node[1]))
    if head == "hyp":
        if len(node) != 3 or isinstance(node[1], SList):
            raise err("expected (hyp LABEL F)")
        return Hyp(str(node[1]), sentence(node[2]))
    if head != "infer":
        raise err(f"unknown proof node {head!r}")
    if len(node) < 3 or isinstance(node[1], SList):
        raise err("expected (infer RULE F ...)")
    try:
        rule = RuleId(str(node[1]))
    except ValueError:
        raise err(f"unknown rule {str(node[1])!r}", node[1]) from None
    concl = sentence(node[2])
    discharges, const, var, children = frozenset(), None, None, []
    rest = list(node[3:])
    while rest:
        item = rest.pop(0)
        if isinstance(item, Sym) and item.startswith(":"):
            if not rest:
                raise err(f"missing value for {item}", item)
            val = rest.pop(0)
            if item == ":discharge":
                if not isinstance(val, SList) or any(isinstance(x, SList) for x in val):
                    raise err(":discharge expects a list of labels", val)
                discharges = frozenset(str(x) for x in val)
            elif item == ":const":
                if isinstance(val, SList):
                    raise err(":const expects a constant", val)
                const = str(val)
            elif item == ":var":
                if isinstance(val, SList) or not str(val).startswith("?"):
                    raise err(":var expects a variable", val)
                var = str(val)
            else:
                raise err(f"unknown annotation {item}", item)
        else:
            children.append(_proof_from(item, sig, new_constants, arities, source))
    return Infer(rule, concl, tuple(children), discharges, const, var, line)


def proof_to_text(d, indent=0):
    pad = "  " * indent
    if isinstance(d, Premise):
        return f"{pad}(premise {to_sexpr(d.sentence)})"
    if isinstance(d, Hyp):
        return f"{pad}(hyp {d.label} {to_sexpr(d.sentence)})"
    head = f"{pad}(infer {d.rule} {to_sexpr(d.conclusion)}"
    if d.discharges:
        head += " :discharge (" + " ".join(sorted(d.discharges)) + ")"
    if d.const is not None:
        head += f" :const {d.const}"
    if d.var is not None:
        head += f" :var {d.var}"
    if not d.children:
        return head + ")"
    return head + "\n" + "\n".join(proof_to_text(c, indent + 1) for c in d.children) + ")"
