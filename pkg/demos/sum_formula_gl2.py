"""Walk through the sum formula for GL_2 and mu = (1, 0).

Run: python3 demos/sum_formula_gl2.py
"""

from endokit import kottwitz_set, render, split_form, gl, trivial_triple, verify_sum_formula
from endokit.kottwitz import EndoContext

G = split_form(gl(2))
mu = (1, 0)
he = trivial_triple(G)
ctx = EndoContext(he)

print("B(GL2, mu) has", len(kottwitz_set(G, mu)), "points")
for b in kottwitz_set(G, mu):
    print()
    print("point", b)
    print(render(ctx.m_sum(b, mu)), end="")

print()
residual = verify_sum_formula(he, mu, ctx=ctx)
print("residual of the sum formula:", "zero" if residual.is_zero() else residual)
