"""
Small structures: isomorphism, games, amalgamation
==================================================
"""

# %%
from ultrahom.fraisse import (check_class_properties, ef_game, enumerate_up_to_iso, is_ultrahomogeneous,
                              parse_class)
from ultrahom.structures import chain, cycle3, empty, wreath

for n in range(1, 5):
    print(n, len(enumerate_up_to_iso(n, "tournament")), len(enumerate_up_to_iso(n, "graph")))

# %%
# The 3-cycle is ultrahomogeneous.  The 3-chain is not: no automorphism sends 0 to 1.
print(is_ultrahomogeneous(cycle3()))
print(is_ultrahomogeneous(chain(3)))

# %%
# Spoiler separates them in two moves: pebble the least point of the chain.
print([ef_game(cycle3(), chain(3), k) for k in range(4)])

# %%
# Hereditary, joint embedding and amalgamation for tournaments on up to four points.
rep = check_class_properties(parse_class("tournaments:4"), 3)
print(rep["pass"], rep["amalgamation"]["instances"])

# %%
# Blowing each point of the 3-cycle up into an edgeless pair gives a digraph whose
# unrelated pairs are exactly the blocks.
W = wreath(cycle3(), empty(2))
print(W.n, sorted(W.arrows)[:6], is_ultrahomogeneous(W)[0])
