import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qletf import corpus
from qletf.proof import (
    PROFILES, Hyp, Infer, Premise, RuleId, check_derivation, open_hypotheses, parse_proof,
    proof_to_text,
)
from qletf.sexpr import ParseError
from qletf.syntax import is_circ_free, parse_sentence


def check(text, profile="qletf"):
    d, sig = parse_proof(text)
    return check_derivation(d, profile, sig)


CORPUS = corpus.names()


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_accepted_under_qletf(name):
    d, sig = corpus.load(name)
    r = check_derivation(d, "qletf", sig)
    assert r.accepted, r.text()


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_vocabulary_split_under_qfde(name):
    d, sig = corpus.load(name)
    r = check_derivation(d, "qfde", sig)
    circ_free = all(is_circ_free(n.conclusion) for n in _nodes(d))
    if circ_free:
        assert r.accepted, r.text()
    else:
        assert not r.accepted and "vocabulary violation" in r.failure.message


def _nodes(d):
    yield d
    if isinstance(d, Infer):
        for c in d.children:
            yield from _nodes(c)


def test_corpus_has_required_members():
    required = {
        "generalization", "forall-neg-to-neg-exists", "neg-exists-to-forall-neg",
        "exists-neg-to-neg-forall", "neg-forall-to-exists-neg", "forall-to-neg-exists-neg",
        "neg-exists-neg-to-forall", "exists-to-neg-forall-neg", "neg-forall-neg-to-exists",
        "id-refl", "id-sym", "id-trans", "witness-forall", "witness-exists",
    }
    assert required <= set(CORPUS)


# ------------------------------------------------------------ single rules

ACCEPT = [
    ("qletf", "(infer and-i (and (P a) (Q)) (premise (P a)) (premise (Q)))"),
    ("qletf", "(infer and-e-r (Q) (premise (and (P a) (Q))))"),
    ("qletf", "(infer or-i-l (or (P a) (Q)) (premise (P a)))"),
    ("qletf", "(infer neg-and-i-r (not (and (P a) (Q))) (premise (not (Q))))"),
    ("qletf", "(infer neg-or-i (not (or (P a) (Q))) (premise (not (P a))) (premise (not (Q))))"),
    ("qletf", "(infer neg-or-e-l (not (P a)) (premise (not (or (P a) (Q)))))"),
    ("qletf", "(infer dn-e (P a) (infer dn-i (not (not (P a))) (premise (P a))))"),
    ("qletf", "(infer forall-e (P a) (premise (forall ?x (P ?x))))"),
    ("qletf", "(infer neg-exists-e (not (P a)) (premise (not (exists ?x (P ?x)))))"),
    ("qletf", "(infer neg-forall-i (not (forall ?x (P ?x))) (premise (not (P a))))"),
    ("qletf", "(infer exists-i (exists ?x (R ?x a)) :const b (premise (R b a)))"),
    ("qletf", "(infer id-e (R b a) (premise (= a b)) (premise (R a a)))"),
    ("qletf", "(infer id-e (R a b) (premise (= a b)) (premise (R a a)))"),
    ("qletf", "(infer exp-circ (Q) (premise (circ (P a))) (premise (P a)) (premise (not (P a))))"),
    ("qletf", "(infer pem-circ (or (P a) (not (P a))) (premise (circ (P a))))"),
    ("qletf", "(infer cons (Q) (premise (circ (P a))) (premise (bull (P a))))"),
    ("qlp", "(infer pem (or (P a) (not (P a))))"),
    ("qcl", "(infer exp (Q) (premise (P a)) (premise (not (P a))))"),
    ("qk3", "(infer exp (Q) (premise (P a)) (premise (not (P a))))"),
    ("qfde-prime", "(infer forall-i-prime (forall ?x (= ?x ?x)) (infer id-i (= c c)))"),
    # vacuous discharge
    ("qletf", "(infer or-e (Q) :discharge (1) (premise (or (P a) (P b))) (premise (Q)) (premise (Q)))"),
    ("qletf", "(infer exists-e (Q) :discharge (1) (premise (exists ?x (P ?x))) (premise (Q)))"),
]


@pytest.mark.parametrize("profile, text", ACCEPT)
def test_rule_instances_accepted(profile, text):
    r = check(text, profile)
    assert r.accepted, r.text()


EIGEN_FORALL_I = """
(infer exists-e (or (Q) (forall ?x (P ?x))) :discharge (1)
  (premise (exists ?x (P ?x)))
  (infer forall-i (or (Q) (forall ?x (P ?x)))
    (infer or-i-r (or (Q) (P c)) (hyp 1 (P c)))))
"""

# the inner witness rule sees hypothesis [2] (R c), discharged only by the outer or-e
EIGEN_EXISTS_E = """
(infer or-e (exists ?x (and (P ?x) (R ?x))) :discharge (2)
  (premise (or (R c) (R c)))
  (infer exists-e (exists ?x (and (P ?x) (R ?x))) :discharge (1)
    (premise (exists ?x (P ?x)))
    (infer exists-i (exists ?x (and (P ?x) (R ?x)))
      (infer and-i (and (P c) (R c)) (hyp 1 (P c)) (hyp 2 (R c)))))
  (infer exists-e (exists ?x (and (P ?x) (R ?x))) :discharge (1)
    (premise (exists ?x (P ?x)))
    (infer exists-i (exists ?x (and (P ?x) (R ?x)))
      (infer and-i (and (P c) (R c)) (hyp 1 (P c)) (hyp 2 (R c))))))
"""

EIGEN_NEG_FORALL_E = """
(infer or-e (exists ?x (and (not (P ?x)) (R ?x))) :discharge (2)
  (premise (or (R c) (R c)))
  (infer neg-forall-e (exists ?x (and (not (P ?x)) (R ?x))) :discharge (1)
    (premise (not (forall ?x (P ?x))))
    (infer exists-i (exists ?x (and (not (P ?x)) (R ?x)))
      (infer and-i (and (not (P c)) (R c)) (hyp 1 (not (P c))) (hyp 2 (R c)))))
  (infer neg-forall-e (exists ?x (and (not (P ?x)) (R ?x))) :discharge (1)
    (premise (not (forall ?x (P ?x))))
    (infer exists-i (exists ?x (and (not (P ?x)) (R ?x)))
      (infer and-i (and (not (P c)) (R c)) (hyp 1 (not (P c))) (hyp 2 (R c))))))
"""

EIGEN_NEG_EXISTS_I = """
(infer exists-e (not (exists ?x (P ?x))) :discharge (1)
  (premise (exists ?x (not (P ?x))))
  (infer neg-exists-i (not (exists ?x (P ?x))) (hyp 1 (not (P c)))))
"""


@pytest.mark.parametrize("text, rule", [
    (EIGEN_FORALL_I, "forall-i"),
    (EIGEN_EXISTS_E, "exists-e"),
    (EIGEN_NEG_FORALL_E, "neg-forall-e"),
    (EIGEN_NEG_EXISTS_I, "neg-exists-i"),
])
def test_eigenconstant_in_open_hypothesis_rejected(text, rule):
    r = check(text)
    assert not r.accepted
    assert r.failure.rule == rule
    assert "eigenconstant violation" in r.failure.message
    assert "open hypothesis" in r.failure.message


@pytest.mark.parametrize("text, where", [
    ("(infer exists-e (P c) :discharge (1) (premise (exists ?x (P ?x))) (hyp 1 (P c)))", "occurs in C"),
    ("(infer forall-i (or (P c) (forall ?x (P ?x))) (infer or-i-l (or (P c) (P c)) (premise (P c))))",
     "occurs in B"),
    ("(infer forall-i (or (Q) (forall ?x (P ?x))) (premise (or (Q) (P c))))", "occurs in premise"),
])
def test_eigenconstant_other_places(text, where):
    r = check(text)
    assert not r.accepted and where in r.failure.message


def test_forall_i_unavailable_in_qfde_prime():
    r = check("(infer forall-i (or (Q) (forall ?x (= ?x ?x))) (infer or-i-r (or (Q) (= c c)) (infer id-i (= c c))))",
              "qfde-prime")
    assert not r.accepted
    assert "not available in profile qfde-prime" in r.failure.message


@pytest.mark.parametrize("profile", ["qfde", "qk3", "qlp", "qcl", "qfde-prime"])
def test_circ_rejected_outside_qletf(profile):
    for text in ("(infer comp (or (circ (P c)) (bull (P c))))",
                 "(infer and-e-l (P c) (premise (and (P c) (bull (Q)))))"):
        r = check(text, profile)
        assert not r.accepted
        assert "vocabulary violation" in r.failure.message


@pytest.mark.parametrize("profile, rule", [
    ("qletf", "pem"), ("qletf", "exp"), ("qfde", "pem"), ("qk3", "pem"), ("qlp", "exp"),
])
def test_classical_rules_gated_by_profile(profile, rule):
    text = {"pem": "(infer pem (or (P a) (not (P a))))",
            "exp": "(infer exp (Q) (premise (P a)) (premise (not (P a))))"}[rule]
    r = check(text, profile)
    assert not r.accepted and "not available" in r.failure.message


@pytest.mark.parametrize("text, fragment", [
    ("(infer and-i (and (P a) (Q)) (premise (Q)) (premise (P a)))", "schema mismatch"),
    ("(infer and-i (and (P a) (Q)) (premise (P a)))", "takes 2 premise"),
    ("(infer dn-i (not (not (P a))) :discharge (1) (premise (P a)))", "discharges no hypotheses"),
    ("(infer dn-i (not (not (P a))) :const a (premise (P a)))", "no :const/:var"),
    ("(infer or-e (Q) :discharge (1) (premise (or (P a) (P b))) (hyp 1 (P b)) (premise (Q)))",
     "schema mismatch"),
    ("(infer or-e (P a) :discharge (1) (premise (or (P a) (P b))) (hyp 1 (P a)) (hyp 1 (P a)))",
     "does not match"),
    ("(infer and-e-l (P a) (hyp 1 (and (P a) (Q))))", "never discharged"),
    ("(infer id-e (R b b) (premise (= a b)) (premise (R a c)))", "schema mismatch"),
    ("(infer id-i (= a b))", "schema mismatch"),
    ("(infer forall-e (P a) :const b (premise (forall ?x (P ?x))))", "disagrees"),
])
def test_malformed_steps_rejected(text, fragment):
    r = check(text)
    assert not r.accepted
    assert fragment in r.text()


def test_discharge_is_local_to_its_branch():
    # [1] is discharged as (P a) in the first branch; reusing it in the second is an error
    text = """(infer or-e (Q) :discharge (1)
      (premise (or (P a) (P b)))
      (infer and-e-r (Q) (infer and-i (and (P a) (Q)) (hyp 1 (P a)) (premise (Q))))
      (infer and-e-r (Q) (infer and-i (and (P a) (Q)) (hyp 1 (P a)) (premise (Q)))))"""
    r = check(text)
    assert not r.accepted and "does not match" in r.failure.message


def test_alphabetic_variant_needs_av():
    bare = "(infer and-e-l (forall ?y (P ?y)) (premise (and (forall ?x (P ?x)) (Q))))"
    licensed = ("(infer av (forall ?y (P ?y)) "
                "(infer and-e-l (forall ?x (P ?x)) (premise (and (forall ?x (P ?x)) (Q)))))")
    assert not check(bare).accepted
    assert check(licensed).accepted
    assert not check(licensed, "qfde").accepted


def test_report_lists_premises_and_path():
    r = check("(infer and-i (and (P a) (Q)) (premise (P a)) (premise (Q)))")
    assert r.text().splitlines()[0] == "accepted"
    assert "premise: (P a)" in r.text()
    bad = check("(infer and-i (and (P a) (Q)) (premise (P a)) (infer dn-e (Q) (premise (Q))))")
    assert "at node root.1 (dn-e)" in bad.text()


def test_porcelain_is_tab_separated_records():
    r = check("(infer and-i (and (P a) (Q)) (premise (P a)) (premise (Q)))")
    lines = r.porcelain().splitlines()
    assert lines[0] == "verdict:accepted"
    for line in lines[1:]:
        assert all(":" in field for field in line.split("\t"))


def test_open_hypotheses_counts_premises():
    d, _ = corpus.load("witness-exists")
    opened = open_hypotheses(d)
    assert list(opened) == [(None, parse_sentence("(exists ?x (P ?x))"))]


# ------------------------------------------------------------ files

@pytest.mark.parametrize("text, fragment", [
    ("(infer frobnicate (P a))", "rule"),
    ("(hyp (P a))", "hyp"),
    ("(infer and-i (and (P a) (Q)) :discharge 1 (premise (P a)) (premise (Q)))", "discharge"),
    ("(premise (P ?x))", "unbound"),
])
def test_proof_parse_errors(text, fragment):
    with pytest.raises(ParseError) as e:
        parse_proof(text, source="x.nd")
    assert str(e.value).startswith("x.nd:") and fragment in str(e.value)


@pytest.mark.parametrize("name", CORPUS)
def test_proof_text_round_trip(name):
    d, _ = corpus.load(name)
    again, _ = parse_proof(proof_to_text(d))
    assert proof_to_text(again) == proof_to_text(d)


def _relabel(d, m):
    if isinstance(d, Hyp):
        return Hyp(m[d.label], d.sentence)
    if isinstance(d, Premise):
        return d
    return dataclasses.replace(
        d, children=tuple(_relabel(c, m) for c in d.children),
        discharges=type(d.discharges)(m[l] for l in d.discharges))


def _labels(d):
    if isinstance(d, Hyp):
        return {d.label}
    if isinstance(d, Infer):
        return set(d.discharges).union(*(_labels(c) for c in d.children))
    return set()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS + ["eigen"]), st.randoms(use_true_random=False))
def test_verdict_invariant_under_relabeling(name, rnd):
    d, sig = parse_proof(EIGEN_EXISTS_E) if name == "eigen" else corpus.load(name)
    labels = sorted(_labels(d), key=str)
    fresh = [f"h{i}" for i in rnd.sample(range(100), len(labels))]
    d2 = _relabel(d, dict(zip(labels, fresh)))
    for profile in PROFILES:
        assert check_derivation(d, profile, sig).accepted == check_derivation(d2, profile, sig).accepted


def test_rule_ids_are_kebab_case():
    assert all(r.value == r.value.lower() and "_" not in r.value for r in RuleId)
