"""
Formulas, reducts, and absoluteness
===================================
"""

# %%
from ultrahom.circular import parse_sample
from ultrahom.formulas import builtin, evaluate, parse, reduct, to_text
from ultrahom.structures import cycle3, induced

f = parse("E w. R(u,w) & R(w,v)")
print(to_text(f), evaluate(cycle3(), f, {"u": 0, "v": 2}))

# %%
# lambda2 turns the labelled arrow structure on a circle sample into its rho order.
D = parse_sample("seed:3:12", "S2")
R = reduct(D.arrow_structure(), builtin("lambda2"))
print((R.matrix() == D.order_matrix).all())

# %%
# mu3 goes the other way in S(3): from tau and the labels back to the arrow.
E = parse_sample("seed:3:12", "S3")
back = reduct(E.order_structure(), builtin("mu3"))
print(back.arrows == E.arrow_structure().arrows)

# %%
# Quantifier-free formulas do not care about the ambient structure.
X = E.arrow_structure()
Y, verts = induced(X, range(0, 12, 2))
g = builtin("lambda3")
print(all(evaluate(Y, g, {"u": i, "v": j}) == evaluate(X, g, {"u": verts[i], "v": verts[j]})
          for i in range(Y.n) for j in range(Y.n)))

# %%
# An existential one does: 1 has a successor in the 3-chain, none in {0, 1}.
from ultrahom.structures import chain

h = parse("E w. R(u,w)")
C = chain(3)
S, _ = induced(C, [0, 1])
print(evaluate(C, h, {"u": 1}), evaluate(S, h, {"u": 1}))
