import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tvgmind import (
    Agent,
    ConfigError,
    SimConfig,
    Society,
    MindGraph,
    TimeVaryingGraph,
    contact_schedule,
    generate_society,
    interact,
    run,
)
from tvgmind.dynamics import build_mind, sampled_schedule


def society(opinions, contacts, sampling="appearance", confidences=None, supports=None,
            lifetime=None):
    g = TimeVaryingGraph(lifetime=lifetime)
    for u in range(len(opinions)):
        g.add_node(str(u))
    for c in contacts:
        g.add_contact(*c)
    confidences = confidences or [0.0] * len(opinions)
    agents = []
    for u, x in enumerate(opinions):
        sup = supports[u] if supports else []
        agents.append(Agent(u, str(u), build_mind("topic", x, confidences[u], sup)))
    return Society(agents, g.freeze(), sampling)


def pair(x1, x2, c1=0.0, c2=0.0, s1=(), s2=()):
    return (Agent(0, "0", build_mind("topic", x1, c1, list(s1))),
            Agent(1, "1", build_mind("topic", x2, c2, list(s2))))


def test_schedule_appearance_dates():
    s = society([0.1, 0.2, 0.3, 0.4], [(1, 2, 0, 5), (2, 3, 1, 2)])
    assert contact_schedule(s) == [(0, (1, 2)), (1, (2, 3))]


def test_schedule_multi_interval():
    s = society([0.1, 0.2], [(0, 1, 1, 2), (0, 1, 4, 5)])
    assert contact_schedule(s) == [(1, (0, 1)), (4, (0, 1))]


def test_schedule_tie_break():
    s = society([0.5] * 6, [(2, 5, 3, 4), (4, 1, 3, 4)])
    assert contact_schedule(s) == [(3, (1, 4)), (3, (2, 5))]


def test_interact_classic_converge():
    a, b = pair(0.4, 0.5)
    rec = interact(a, b, 0, SimConfig(eps=0.2, mu=0.5))
    assert a.opinion("topic") == pytest.approx(0.45)
    assert b.opinion("topic") == pytest.approx(0.45)
    assert rec.updated_i and rec.updated_j


def test_interact_classic_too_far():
    a, b = pair(0.1, 0.9)
    rec = interact(a, b, 0, SimConfig(eps=0.2, mu=0.5))
    assert (a.opinion("topic"), b.opinion("topic")) == (0.1, 0.9)
    assert not rec.updated_i and not rec.updated_j


def test_interact_strict_inequality():
    a, b = pair(0.25, 0.5)
    interact(a, b, 0, SimConfig(eps=0.25, mu=0.5))
    assert (a.opinion("topic"), b.opinion("topic")) == (0.25, 0.5)


def test_interact_cognitive_asymmetric():
    # eps_i = 1.0 * (1 - 0.5) = 0.5; eps_j = 1.0 * (1 - 0.95) = 0.05 with k = 0
    a, b = pair(0.3, 0.6, c1=0.5, c2=0.95)
    cfg = SimConfig(mode="cognitive", eps_max=1.0, k=0, mu=0.5, delta_plus=0.0)
    rec = interact(a, b, 0, cfg)
    assert rec.eps_i == pytest.approx(0.5) and rec.eps_j == pytest.approx(0.05)
    assert a.opinion("topic") == pytest.approx(0.45)
    assert b.opinion("topic") == 0.6


def test_interact_confidence_coupling():
    a, b = pair(0.4, 0.9, c1=0.5, c2=0.5)
    cfg = SimConfig(mode="cognitive", eps_max=1.0, k=0, delta_plus=0.2, delta_minus=0.5)
    # eps = 0.5 for both, |d| = 0.5 -> both disagree
    interact(a, b, 0, cfg)
    assert a.confidence("topic") == 0.25 and b.confidence("topic") == 0.25


def test_interact_uses_pre_interaction_minds():
    a, b = pair(0.4, 0.5, c1=0.0, c2=0.0)
    cfg = SimConfig(mode="cognitive", eps_max=0.2, k=0, delta_plus=0.9)
    rec = interact(a, b, 0, cfg)
    assert rec.eps_i == 0.2 and rec.eps_j == 0.2
    assert rec.dc_i_post == pytest.approx(0.9)


def test_interact_missing_topic():
    a, b = pair(0.4, 0.5)
    with pytest.raises(KeyError):
        interact(a, b, 0, SimConfig(topic_id="other"))


def test_run_no_contacts():
    s = society([0.2, 0.7], [])
    t = run(s, SimConfig())
    assert len(t) == 0 and t.final_opinions == t.initial_opinions


def test_run_equal_opinions():
    s = society([0.5, 0.5], [(0, 1, 0, 1)], confidences=[0.2, 0.2])
    t = run(s, SimConfig(delta_plus=0.5))
    assert len(t) == 1
    assert t.final_opinions == [0.5, 0.5]
    assert t.final_confidences == pytest.approx([0.6, 0.6])


def test_run_does_not_mutate_society():
    s = society([0.2, 0.3], [(0, 1, 0, 1)])
    run(s, SimConfig(eps=1))
    assert s.opinions("topic") == [0.2, 0.3]


def test_run_deterministic():
    s = generate_society("complete_static", 20, seed=3)
    cfg = SimConfig(eps=0.3, seed=9, max_events=3000)
    assert run(s, cfg).records == run(s, cfg).records


def test_run_rejects_bad_config():
    s = society([0.2, 0.3], [(0, 1, 0, 1)])
    with pytest.raises(ConfigError) as exc:
        run(s, SimConfig(mu=2, mode="weird", eps=-1))
    assert len(exc.value.errors) == 3


def test_run_max_events_truncates():
    s = generate_society("ring_static", 5, seed=1)
    t = run(s, SimConfig(eps=0.0, max_events=17, conv_window=None))
    assert len(t) == 17
    assert [r.time for r in t.records] == list(range(17))


def test_per_tick_skips_empty_ticks_and_stops():
    s = society([0.1, 0.2, 0.3], [(0, 1, 2, 4), (1, 2, 6, 7)], sampling="per_tick")
    ev = list(sampled_schedule(s, np.random.default_rng(0), 100))
    assert [t for t, _ in ev] == [2, 3, 6]
    assert [p for _, p in ev] == [(0, 1), (0, 1), (1, 2)]


def test_convergence_halts_run():
    s = generate_society("complete_static", 10, seed=2)
    t = run(s, SimConfig(eps=1.0, conv_window=50, conv_tol=1e-6, max_events=10**5))
    assert t.converged_at == len(t) - 1 < 10**5


def test_generate_ring():
    s = generate_society("ring_static", 4, seed=0)
    assert {e.endpoints for e in s.contacts.edges} == {(0, 1), (1, 2), (2, 3), (0, 3)}
    assert len(generate_society("ring_static", 2, seed=0).contacts.edges) == 1


def test_generate_same_seed():
    a = generate_society("random_pairwise", 10, {"m": 30}, seed=4)
    b = generate_society("random_pairwise", 10, {"m": 30}, seed=4)
    assert a.opinions("topic") == b.opinions("topic")
    assert ([(e.endpoints, e.presence) for e in a.contacts.edges]
            == [(e.endpoints, e.presence) for e in b.contacts.edges])


def test_generate_rejects():
    with pytest.raises(ValueError):
        generate_society("ring_static", 1)
    with pytest.raises(ValueError):
        generate_society("galaxy", 4)
    with pytest.raises(ValueError):
        generate_society("ring_static", 4, {"bogus": 1})


def test_generate_supports():
    s = generate_society("complete_static", 3, {"support_nodes": 2, "support_dc": [0.2, 0.4],
                                                "correlation": "chain"}, seed=0)
    m = s.agents[0].mind
    assert len(m) == 3
    assert all(0.2 <= m.reps[u].confidence <= 0.4 for u in (1, 2))
    assert {e.endpoints for e in m.graph.edges} == {(0, 1), (1, 2)}


# -- dynamics invariants --------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(2, 12), st.floats(0.05, 1), st.floats(0, 1), st.integers(0, 2**16),
       st.sampled_from(["classic", "cognitive"]))
def test_opinions_stay_in_unit_interval(n, eps, mu, seed, mode):
    s = generate_society("complete_static", n, {"support_nodes": 1, "support_dc": [0, 1]},
                         seed=seed)
    t = run(s, SimConfig(mode=mode, eps=eps, eps_max=eps, mu=mu, seed=seed, max_events=300))
    x = t.opinion_matrix()
    assert ((0 <= x) & (x <= 1)).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 30), st.floats(0.05, 1), st.integers(0, 2**16))
def test_classic_mean_conserved(n, eps, seed):
    s = generate_society("complete_static", n, seed=seed)
    t = run(s, SimConfig(eps=eps, mu=0.5, seed=seed, max_events=2000))
    assert abs(math.fsum(t.final_opinions) / n - math.fsum(t.initial_opinions) / n) <= 1e-9
    for r in t.records:
        if r.updated_i and r.updated_j:
            assert abs((r.x_i_post + r.x_j_post) - (r.x_i_pre + r.x_j_pre)) <= 4e-16


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 12), st.floats(0.01, 0.99), st.integers(0, 2**16))
def test_monotone_approach(n, mu, seed):
    s = generate_society("complete_static", n, seed=seed)
    t = run(s, SimConfig(eps=0.5, mu=mu, seed=seed, max_events=300))
    for r in t.records:
        before = abs(r.x_i_pre - r.x_j_pre)
        # below ~1e-12 the gap is at the resolution of double rounding
        if (r.updated_i or r.updated_j) and before > 1e-12:
            assert abs(r.x_i_post - r.x_j_post) < before


def test_cognitive_reduces_to_classic():
    s = generate_society("complete_static", 30, {"support_nodes": 2}, seed=5)
    classic = run(s, SimConfig(mode="classic", eps=0.2, delta_plus=0.0, seed=5, max_events=4000))
    cog = run(s, SimConfig(mode="cognitive", eps_max=0.2, delta_plus=0.0, seed=5,
                           max_events=4000))
    assert classic.records == cog.records


def test_immobile_agent():
    supports = [[(0.5, 1.0)]] + [[] for _ in range(5)]
    s = society([0.9, 0.1, 0.2, 0.3, 0.4, 0.5], [(u, v, 0, math.inf) for u in range(6)
                                                  for v in range(u + 1, 6)],
                sampling="per_tick", confidences=[1.0] + [0.0] * 5, supports=supports)
    t = run(s, SimConfig(mode="cognitive", eps_max=1.0, k=0, delta_plus=0.0, max_events=2000,
                         conv_window=None))
    assert t.final_opinions[0] == 0.9
    assert all(r.eps_i == 0 for r in t.records if r.i == 0)


def test_activation_window_config():
    agents = []
    for u, x in enumerate((0.3, 0.5)):
        m = build_mind("topic", x, 0.0, [(0.5, 1.0)])
        late = MindGraph()
        late.add_rep(m.rep_for_topic("topic"))
        late.add_rep(m.rep("topic.s1"), "topic.s1")
        late.correlate("topic", "topic.s1", 5, 10)
        agents.append(Agent(u, str(u), late))
    g = TimeVaryingGraph()
    g.add_node("0"), g.add_node("1")
    g.add_contact(0, 1, 0, 1)
    s = Society(agents, g)
    # the support is linked only during [5, 10)
    seen = run(s, SimConfig(mode="cognitive", eps_max=1.0, k=0))
    blind = run(s, SimConfig(mode="cognitive", eps_max=1.0, k=0, activation_window=(0, 5)))
    assert seen.records[0].eps_i == 0.5
    assert blind.records[0].eps_i == 1.0


def test_config_roundtrip():
    cfg = SimConfig(mode="cognitive", activation_window=(0, math.inf))
    again = SimConfig.from_dict(cfg.to_dict())
    assert again == cfg
    with pytest.raises(ConfigError):
        SimConfig.from_dict({"nonsense": 1})
