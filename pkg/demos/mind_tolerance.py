"""How a mind's supporting beliefs set its openness on a topic.

An agent holds an opinion on "topic".  Supporting representations that are
linked to it at the time of an encounter get activated along with it, and
their confidences decide how far the agent is willing to move.
"""

from tvgmind import (
    EpistemicRep,
    ExternalEvent,
    Kind,
    MindGraph,
    Proposition,
    TimeInterval,
    activate,
    classify,
    resistance,
    tolerance_of,
)

mind = MindGraph()
mind.add_rep(EpistemicRep(Proposition("topic", "taxes should rise"), 0.0, 0.7, 0.2,
                          designated_kind=Kind.OPINION))
mind.add_rep(EpistemicRep(Proposition("budget", "the deficit is large", "factual"),
                          0.8, 0.9, 0.9))
mind.add_rep(EpistemicRep(Proposition("fairness", "the rich pay too little", "evaluative"),
                          0.0, 0.8, 0.6))
mind.add_rep(EpistemicRep(Proposition("weather"), 0.5, 0.5, 1.0))

# the budget link is permanent, the fairness link only lasts a while
mind.correlate("topic", "budget", 0, 100)
mind.correlate("budget", "fairness", 10, 20)

for topic in ("topic", "budget", "fairness", "weather"):
    rep = mind.rep_for_topic(topic)
    kinds = classify(rep, tau=0.1)
    print(f"{topic:9s} T_o={rep.objective:.1f} T_s={rep.subjective:.1f} "
          f"d_c={rep.confidence:.1f} -> {kinds.primary.value}")

eps_max = 0.4
for start, end in [(0, 5), (0, 15), (30, 40)]:
    window = TimeInterval(start, end)
    ev = ExternalEvent("topic", start)
    comp = activate(mind, ev, window)
    names = sorted(mind.reps[u].proposition.topic_id for u in comp)
    print(f"window [{start}, {end}): active={names}")
    for k in (0.0, 3.0):
        r = resistance(mind, comp, k)
        eps = tolerance_of(mind, ev, eps_max, k, window)
        print(f"    k={k:g}: resistance={r:.3f} tolerance={eps:.3f}")
