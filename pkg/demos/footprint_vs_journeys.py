"""A connected footprint does not mean anyone can reach anyone.

Three people meet in pairs: b and c talk early, a and b talk later.  Every
pair is linked in the aggregated graph, yet news from a never gets to c.
"""

from tvgmind import (
    TimeVaryingGraph,
    foremost_journey,
    footprint,
    mutual_reachability_matrix,
    snapshots,
)

g = TimeVaryingGraph()
for name in "abc":
    g.add_node(name)
g.add_contact("b", "c", 0, 1)
g.add_contact("a", "b", 2, 3)

fp = footprint(g)
print("footprint edges:", sorted((g.label(u), g.label(v)) for u, v in fp.edges))
print("footprint connected:", fp.is_connected())

for iv, snap in snapshots(g):
    edges = [f"{g.label(u)}-{g.label(v)}" for u, v in sorted(snap.edges)]
    print(f"  [{iv.start}, {iv.end}): {edges or 'no edges'}")

for u, v in [("c", "a"), ("a", "c")]:
    j = foremost_journey(g, u, v, 0)
    if j is None:
        print(f"{u} -> {v}: no journey")
    else:
        hops = ", ".join(f"{g.label(x)}->{g.label(y)}@{h.departure}"
                         for (x, y), h in zip(zip(j.nodes, j.nodes[1:]), j.hops))
        print(f"{u} -> {v}: {hops}, arrives {j.arrival}")

# rows reach columns; the matrix is not symmetric
m = mutual_reachability_matrix(g)
print("reachability matrix (rows = sources a, b, c):")
print(m.astype(int))

# add a late b-c contact and the gap closes
g.add_contact("b", "c", 4, 5)
j = foremost_journey(g, "a", "c", 0)
print("after a late b-c contact, a -> c arrives at", j.arrival)
