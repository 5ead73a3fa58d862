"""
The bit graph, its tournament transfer, and witnesses
=====================================================

Run with ``python demos/rado_and_transfer.py``.
"""

# %%
# The graph joins i < j when bit i of j is set.
import numpy as np

from ultrahom.random_structures import (WitnessQuery, bit_graph, check_extension_property, find_witness,
                                        graph_to_tournament, prefix, tournament_to_graph, transfer_invariant)
from ultrahom.structures import to_dot

G = bit_graph()
print(prefix(G, 7).matrix().astype(int))

# %%
# Transfer: keep the arrow m -> n for an edge with m < n, reverse it for a non-edge.
T = graph_to_tournament(G)
print(to_dot(prefix(T, 4), "T"))

# %%
# Going back recovers the graph exactly.
back = tournament_to_graph(T)
M = np.array([[back(m, n) == G(m, n) for n in range(64) if n != m] for m in range(64)])
print("round trip agrees on", M.size, "pairs:", bool(M.all()))

# %%
# A vertex adjacent to 0 but not to 1.  2^2 + 2^0 = 5 is the closed-form answer.
print(find_witness(G, WitnessQuery.make([0, 1], [0])).to_json())

# %%
# Above max H, a vertex realises (H, K) in the graph exactly when it does in
# the tournament.  Count the disagreements over a small grid.
rep = transfer_invariant(G, range(6), 2, 512)
print("queries", len(rep["queries"]), "violations", rep["violations"])

# %%
# Extension property up to |H| = 2, asking for two witnesses each time.
for P in (G, T):
    r = check_extension_property(P, 2, range(6), budget=2 ** 9, witnesses=2)
    print(P.tag, "pass" if r["pass"] else "fail")
