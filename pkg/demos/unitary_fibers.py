"""Endoscopic classes of U(3) and U(4) and how they restrict to Levi subgroups.

Run: python3 demos/unitary_fibers.py
"""

from endokit import enumerate_elliptic, fiber, inner_class_count, unitary, x_map
from endokit.galois import stable_subsets
from endokit.report import class_id

for n in (3, 4):
    G = unitary(n)
    print(f"U({n}): elliptic classes with s of order <= 2")
    for t in enumerate_elliptic(G, 2):
        print(" ", class_id(t), t)
        for S in stable_subsets(G):
            fib = fiber(t, S)
            shapes = [len(x_map(e).h_roots) for e in fib]
            inner = [inner_class_count(e) for e in fib]
            print(f"    Levi {sorted(S)}: {len(fib)} embedded classes, H_M root counts {shapes}, inner counts {inner}")
    print()
