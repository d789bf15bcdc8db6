"""Kottwitz sets of GL_n for minuscule mu, next to the Newton-polygon picture.

Run: python3 demos/kottwitz_sets.py
"""

from endokit import gl, kottwitz_set, split_form
from endokit.kottwitz import minuscule_cochars

for n in (2, 3, 4):
    G = split_form(gl(n))
    for mu in minuscule_cochars(G):
        if sum(mu) <= 0:
            continue
        pts = kottwitz_set(G, mu)
        slopes = ["(" + ",".join(str(x) for x in b.nu) + ")" for b in pts]
        print(f"GL{n} mu={mu}: {len(pts)} points: {' '.join(slopes)}")
