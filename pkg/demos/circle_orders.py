"""
Dense local orders on the circle
================================

Rationals q are read as the points e^{iq}.  The arrow follows the short
counterclockwise arc, and the label says which fixed arc q lands in.
"""

# %%
from fractions import Fraction

from ultrahom.angles import PI, format_angle, s2_arrow, s3_arrow, s3_class
from ultrahom.circular import density_witness, order_axioms_check, parse_sample, rho, tau, trim_endpoints

print(format_angle(PI), s2_arrow(0, 3), s2_arrow(3, 0))   # 3 < pi, so 0 -> 3

# %%
# In S(3) arrows need an arc shorter than 2pi/3; 0 and 3 end up unrelated.
print(s3_arrow(0, 3), s3_arrow(3, 0))

# %%
# rho keeps the arrow inside a class and flips it across classes.  The result is a linear order.
D = parse_sample("seed:7:40", "S2")
print(order_axioms_check(D)["pass"], order_axioms_check(D, relation="arrow")["transitive"])
print([str(q) for q in D.sorted_points()[:8]])

# %%
# tau does the same for three classes, with incomparability filling the third case.
E = parse_sample("seed:7:40", "S3")
print(order_axioms_check(E)["pass"])
print({c: sum(1 for p in E.points if s3_class(p) == c) for c in "ABC"})

# %%
# Between any two points there is a point of each class.
x, y = Fraction(2), Fraction(3)
for target in "ABC":
    z = density_witness(x, y, target, "S3")
    print(target, z, tau(x, z) and tau(z, y))
print(rho(2, 0))

# %%
# A finite sample always has two endpoints; trimming drops both.
print(len(D), len(trim_endpoints(D)))
print(D.to_dot()[:200])
