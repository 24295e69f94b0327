"""Bounded countermodel search.

Structures over the query's vocabulary are enumerated in a fixed order for
domain sizes 1..max_domain; on each, valuations are enumerated in their
fixed order.  The first (structure, valuation) making every premise 1 and
the conclusion 0 is reported.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice, product

from .proof import get_profile
from .semantics import (
    CapExceeded, Evaluator, PredInterp, Structure, enumerate_valuations, ground,
    has_e1, has_e2,
)
from .syntax import Signature, constants_of, has_identity, is_circ_free, predicates_of, to_sexpr

NEITHER, POS, NEG, BOTH = "neither", "pos", "neg", "both"
_STATES = (NEITHER, POS, NEG, BOTH)


@dataclass(frozen=True)
class SearchConfig:
    max_domain: int = 2
    max_structures: int = 10_000_000
    max_choice_atoms: int = 16
    profile: str = "qletf"

    def __post_init__(self):
        for name in ("max_domain", "max_structures", "max_choice_atoms"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        get_profile(self.profile)


@dataclass(frozen=True)
class Countermodel:
    structure: Structure
    choices: object
    premise_values: tuple
    conclusion_value: int
    domain_size: int
    index: int  # position in the structure stream for this domain size


@dataclass(frozen=True)
class Exhausted:
    domains_tried: int
    structures_tried: int


@dataclass(frozen=True)
class CapHit:
    cap: str
    domain_size: int
    structures_tried: int
    detail: str = ""


def query_signature(premises, conclusion):
    """Constants and predicates occurring in the query, and whether identity does."""
    sents = list(premises) + [conclusion]
    consts = sorted(set().union(*(constants_of(s) for s in sents)))
    preds = {}
    for s in sents:
        for p, n in predicates_of(s):
            if preds.setdefault(p, n) != n:
                raise ValueError(f"predicate {p} used with two arities")
    return Signature(tuple(consts), tuple(sorted(preds.items()))), any(map(has_identity, sents))


def predicate_states(constraint):
    if has_e1(constraint) and has_e2(constraint):
        return (POS, NEG)
    if has_e1(constraint):
        return (POS, NEG, BOTH)
    if has_e2(constraint):
        return (NEITHER, POS, NEG)
    return _STATES


def _identity_options(a, b, constraint):
    if a == b:
        return (False,) if has_e2(constraint) else (False, True)
    return (True,) if has_e1(constraint) else (False, True)


def enumerate_structures(sig, n, constraint="none", identity=True):
    """Yield every structure with domain ``d1..dn`` over ``sig``.

    Order: constant assignments (lexicographic), then per predicate and per
    tuple a state in (neither, pos, neg, both) restricted by ``constraint``,
    then the identity anti-extension.  With ``identity=False`` the identity
    anti-extension is left empty (used when the query has no identity).
    """
    if n < 1:
        raise ValueError("domain size must be at least 1: the domain is non-empty")
    domain = tuple(f"d{i}" for i in range(1, n + 1))
    consts = list(sig.constants)
    preds = list(sig.predicates)
    states = predicate_states(constraint)
    slots = [(p, t) for p, k in preds for t in product(domain, repeat=k)]
    pairs = list(product(domain, repeat=2)) if identity else []
    id_opts = [_identity_options(a, b, constraint) for a, b in pairs]
    for values in product(domain, repeat=len(consts)):
        assign = dict(zip(consts, values))
        for st in product(states, repeat=len(slots)):
            pos = {p: set() for p, _ in preds}
            neg = {p: set() for p, _ in preds}
            for (p, t), s in zip(slots, st):
                if s in (POS, BOTH):
                    pos[p].add(t)
                if s in (NEG, BOTH):
                    neg[p].add(t)
            interp = {p: PredInterp(pos[p], neg[p], k) for p, k in preds}
            for idn in product(*id_opts):
                yield Structure(domain, assign, interp,
                                frozenset(pr for pr, on in zip(pairs, idn) if on))


def count_structures(sig, n, constraint="none", identity=True):
    states = len(predicate_states(constraint))
    domain = [f"d{i}" for i in range(1, n + 1)]
    total = n ** len(sig.constants)
    total *= states ** sum(n ** k for _, k in sig.predicates)
    if identity:
        for a in domain:
            for b in domain:
                total *= len(_identity_options(a, b, constraint))
    return total


def _scan(premises, conclusion, sig, n, constraint, identity, start, stop, cap):
    """Search structures ``start..stop-1`` of size ``n``.

    Returns ``("found", index, structure, choices)``, ``("cap", index, detail)``
    or ``("none",)``.
    """
    stream = islice(enumerate_structures(sig, n, constraint, identity), start, stop)
    for index, s in enumerate(stream, start):
        gp = [ground(s, p) for p in premises]
        gc = ground(s, conclusion)
        try:
            for choices in enumerate_valuations(s, list(premises) + [conclusion], cap):
                ev = Evaluator(s, choices)
                if all(ev.value(p) for p in gp) and not ev.value(gc):
                    return ("found", index, s, choices)
        except CapExceeded as e:
            return ("cap", index, str(e))
    return ("none",)


def _scan_args(args):
    return _scan(*args)


def find_countermodel(premises, conclusion, cfg=None, jobs=1, chunk=256):
    """Search for an interpretation where all ``premises`` hold and
    ``conclusion`` fails.  Output does not depend on ``jobs``."""
    cfg = cfg or SearchConfig()
    profile = get_profile(cfg.profile)
    premises = list(premises)
    if not profile.circ_allowed:
        for f in premises + [conclusion]:
            if not is_circ_free(f):
                raise ValueError(f"circ/bull not available in {profile.name}: {to_sexpr(f)}")
    sig, identity = query_signature(premises, conclusion)
    tried = 0
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for n in range(1, cfg.max_domain + 1):
            total = count_structures(sig, n, profile.constraint, identity)
            budget = cfg.max_structures - tried
            limit = min(total, budget)
            result = _run(premises, conclusion, sig, n, profile.constraint, identity,
                          limit, cfg.max_choice_atoms, pool, chunk)
            if result[0] == "found":
                _, index, s, choices = result
                return _replayed(premises, conclusion, s, choices, n, index)
            if result[0] == "cap":
                return CapHit("max_choice_atoms", n, tried + result[1], result[2])
            tried += limit
            if limit < total:
                return CapHit("max_structures", n, tried,
                              f"{total} structures at domain size {n}")
        return Exhausted(cfg.max_domain, tried)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def _run(premises, conclusion, sig, n, constraint, identity, limit, cap, pool, chunk):
    if pool is None:
        return _scan(premises, conclusion, sig, n, constraint, identity, 0, limit, cap)
    ranges = [(i, min(i + chunk, limit)) for i in range(0, limit, chunk)]
    args = [(premises, conclusion, sig, n, constraint, identity, a, b, cap) for a, b in ranges]
    # map() yields in submission order, so the first hit seen is the first
    # in enumeration order and every earlier range has completed
    for result in pool.map(_scan_args, args):
        if result[0] != "none":
            return result
    return ("none",)


def _replayed(premises, conclusion, s, choices, n, index):
    ev = Evaluator(s, choices)
    pv = tuple(ev.value(ground(s, p)) for p in premises)
    cv = ev.value(ground(s, conclusion))
    if not all(pv) or cv:
        raise AssertionError("countermodel failed to replay")
    return Countermodel(s, choices, pv, cv, n, index)
