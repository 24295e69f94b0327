import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from oracles import CONSTS, PREDS, VARS, tidy
from qletf.semantics import PredInterp, Structure
from qletf.syntax import (
    And, Atom, Bull, Circ, Eq, Exists, Forall, Not, Or, size,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


def _leaf(terms, preds, identity):
    opts = []
    for p in preds:
        n = PREDS[p]
        opts.append(st.tuples(*[st.sampled_from(terms)] * n).map(lambda a, p=p: Atom(p, a)))
    if identity:
        opts.append(st.builds(Eq, st.sampled_from(terms), st.sampled_from(terms)))
    return st.one_of(opts)


def raw_formulas(terms=VARS + CONSTS, preds=("P", "R"), identity=True, circ=True, leaves=5):
    unary = [Not] + ([Circ, Bull] if circ else [])

    def extend(children):
        opts = [st.builds(u, children) for u in unary]
        opts += [st.builds(b, children, children) for b in (And, Or)]
        opts += [st.builds(q, st.sampled_from(VARS), children) for q in (Forall, Exists)]
        return st.one_of(opts)

    return st.recursive(_leaf(terms, preds, identity), extend, max_leaves=leaves)


def sentences(max_size=8, **kw):
    return raw_formulas(**kw).map(tidy).filter(lambda f: size(f) <= max_size)


@st.composite
def structures(draw, max_n=2, constants=CONSTS, preds=("P", "R", "Q"), identity=True,
               states=("neither", "pos", "neg", "both")):
    n = draw(st.integers(1, max_n))
    domain = tuple(f"d{i}" for i in range(1, n + 1))
    assign = {c: draw(st.sampled_from(domain)) for c in constants}
    interp = {}
    for p in preds:
        k = PREDS[p]
        pos, neg = set(), set()
        for t in itertools.product(domain, repeat=k):
            s = draw(st.sampled_from(states))
            if s in ("pos", "both"):
                pos.add(t)
            if s in ("neg", "both"):
                neg.add(t)
        interp[p] = PredInterp(pos, neg, k)
    idn = set()
    if identity:
        for pair in itertools.product(domain, repeat=2):
            if draw(st.booleans()):
                idn.add(pair)
    return Structure(domain, assign, interp, frozenset(idn))


@pytest.fixture
def acceptance_log(request):
    log = getattr(request.config, "_acceptance_lines", None)
    if log is None:
        log = request.config._acceptance_lines = []
    return log


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
