import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tvgmind import (
    EpistemicRep,
    ExternalEvent,
    Kind,
    MindGraph,
    Proposition,
    TimeInterval,
    activate,
    classify,
    confidence_update,
    resistance,
    tolerance_of,
)

P = Proposition("p")


def rep(to=0.0, ts=0.5, dc=0.5, topic="p"):
    return EpistemicRep(Proposition(topic), to, ts, dc)


def mind_with(confidences, links=()):
    m = MindGraph()
    for n, dc in enumerate(confidences):
        m.add_rep(rep(dc=dc, topic="topic" if n == 0 else f"s{n}"))
    for u, v, t1, t2 in links:
        m.correlate(u, v, t1, t2)
    return m


def test_rep_range_checks():
    with pytest.raises(ValueError):
        EpistemicRep(P, 1.2, 0.5, 0.5)
    with pytest.raises(ValueError):
        EpistemicRep(P, 0.5, -0.1, 0.5)
    with pytest.raises(ValueError):
        EpistemicRep(P, 0.5, 0.5, 2)
    with pytest.raises(ValueError):
        Proposition("x", kind_tag="moral")


def test_classify_knowledge():
    k = classify(EpistemicRep(P, 0.7, 0.7, 0.1), 0)
    assert (k.knowledge, k.belief, k.opinion) == (True, True, True)
    assert k.primary is Kind.KNOWLEDGE


def test_classify_opinion_only():
    k = classify(EpistemicRep(P, 0, 0.4, 0.1), 0)
    assert k.flags == {Kind.OPINION}
    assert k.primary is Kind.OPINION


def test_classify_unclassified_corner():
    k = classify(EpistemicRep(P, 1, 0.2, 0.1), 0)
    assert k.flags == frozenset()
    assert k.primary is Kind.UNCLASSIFIED


def test_classify_tau():
    r = EpistemicRep(P, 0.5, 0.52, 0.1)
    assert not classify(r).knowledge
    assert classify(r, tau=0.05).knowledge
    with pytest.raises(ValueError):
        classify(r, -0.1)


@pytest.mark.parametrize("to, ts", list(itertools.product([0, 0.25, 0.5, 0.75, 1], repeat=2)))
def test_classify_grid(to, ts):
    k = classify(EpistemicRep(P, to, ts, 0.5))
    assert k.knowledge == (to == ts)
    assert k.belief == (0 < to < 1)
    assert k.opinion == (0 <= to < 1)
    if k.belief:
        assert k.opinion


def test_activate_isolated():
    m = mind_with([0.5])
    assert activate(m, ExternalEvent("topic", 0)) == {0}


def test_activate_chain():
    m = mind_with([0.5, 0.5, 0.5], [("topic", "s1", 1, 3), ("s1", "s2", 2, 4)])
    assert activate(m, ExternalEvent("topic", 0), TimeInterval(0, 5)) == {0, 1, 2}


def test_activate_expired_link():
    m = mind_with([0.5, 0.5, 0.5], [("topic", "s1", 1, 3), ("s1", "s2", 0, 1)])
    assert activate(m, ExternalEvent("topic", 0), TimeInterval(1, 5)) == {0, 1}


def test_activate_unknown_topic():
    with pytest.raises(KeyError):
        activate(mind_with([0.5]), ExternalEvent("nope", 0))


def test_activate_window_monotone():
    m = mind_with([0.1] * 4, [("topic", "s1", 2, 3), ("s1", "s2", 4, 6), ("s2", "s3", 8, 9)])
    ev = ExternalEvent("topic", 0)
    prev = set()
    for end in range(1, 12):
        cur = activate(m, ev, TimeInterval(0, end))
        assert 0 in cur and prev <= cur
        prev = cur


def test_resistance_examples():
    assert resistance(mind_with([1.0]), {0}, 3) == 0.25
    assert resistance(mind_with([0.5, 1.0]), {0, 1}, 3) == pytest.approx(0.3)
    assert resistance(mind_with([0.5, 1.0]), {0, 1}, 0) == 0.75
    with pytest.raises(ValueError):
        resistance(mind_with([0.5]), set(), 3)


confs = st.lists(st.floats(0, 1), min_size=1, max_size=8)


@given(confs, st.floats(0, 20))
def test_resistance_bounds(cs, k):
    r = resistance(mind_with(cs), range(len(cs)), k)
    assert 0 <= r <= 1


@given(confs, st.integers(0, 7), st.floats(0.01, 0.5), st.floats(0.1, 10))
def test_resistance_increasing_in_confidence(cs, i, bump, k):
    i %= len(cs)
    if cs[i] + bump > 1:
        return
    hi = list(cs)
    hi[i] += bump
    assert resistance(mind_with(hi), range(len(cs)), k) > resistance(mind_with(cs), range(len(cs)), k)


@given(confs, st.floats(0, 1), st.floats(0.1, 10))
def test_resistance_adding_confident_node(cs, extra, k):
    mean = sum(cs) / len(cs)
    if extra < mean:
        return
    before = resistance(mind_with(cs), range(len(cs)), k)
    after = resistance(mind_with(cs + [extra]), range(len(cs) + 1), k)
    assert after >= before - 1e-15


@given(confs, st.floats(0, 10), st.floats(0, 10))
def test_resistance_decreasing_in_k(cs, k1, k2):
    m = mind_with(cs)
    lo, hi = sorted((k1, k2))
    assert resistance(m, range(len(cs)), hi) <= resistance(m, range(len(cs)), lo)


def test_tolerance_examples():
    ev = ExternalEvent("topic", 0)
    assert tolerance_of(mind_with([0.0, 0.0], [("topic", "s1", 0, 5)]), ev, 0.4) == 0.4
    assert tolerance_of(mind_with([1.0]), ev, 0.4, k=0) == 0.0
    assert tolerance_of(mind_with([1.0]), ev, 0.4, k=3) == pytest.approx(0.3)


@given(confs, st.floats(0, 1), st.floats(0, 10))
def test_tolerance_bounds(cs, eps_max, k):
    links = [("topic", f"s{n}", 0, 10) for n in range(1, len(cs))]
    eps = tolerance_of(mind_with(cs, links), ExternalEvent("topic", 0), eps_max, k)
    assert 0 <= eps <= eps_max
    if all(c == 0 for c in cs):
        assert eps == eps_max


def test_confidence_update_examples():
    assert confidence_update(rep(dc=0.5), True, 0.2).confidence == pytest.approx(0.6)
    assert confidence_update(rep(dc=1.0), True, 0.7).confidence == 1.0
    assert confidence_update(rep(dc=0.5), False, 0.2, 0.0).confidence == 0.5
    r = confidence_update(rep(to=0.3, ts=0.6, dc=0.5), False, 0.1, 0.5)
    assert (r.objective, r.subjective, r.confidence) == (0.3, 0.6, 0.25)


@settings(max_examples=50)
@given(st.floats(0, 1), st.floats(0.01, 1))
def test_repeated_agreement_converges(dc, dp):
    r = rep(dc=dc)
    last = r.confidence
    for _ in range(2000):
        r = confidence_update(r, True, dp)
        assert last <= r.confidence <= 1
        last = r.confidence
    assert r.confidence == pytest.approx(1.0, abs=1e-6)


def test_mind_one_node_per_topic():
    m = mind_with([0.5])
    with pytest.raises(ValueError):
        m.add_rep(rep(topic="topic"), "other")
    with pytest.raises(ValueError):
        m.set_rep("topic", rep(topic="zzz"))


def test_mind_copy_independent():
    m = mind_with([0.5])
    c = m.copy()
    c.set_rep("topic", rep(dc=0.9, topic="topic"))
    assert m.rep_for_topic("topic").confidence == 0.5
