"""The (P1)^4 case: translations, word growth and the Dirichlet domain."""

import time

from k3cones.dirichlet import dirichlet_domain, enumerate_words, permutation_matrices
from k3cones.lattice import IntLattice, element_order, translation_isometry

G = [[0 if i == j else 2 for j in range(4)] for i in range(4)]
L = IntLattice(G)

M132 = translation_isometry(L, (1, 0, 0, 0), (0, -1, 1, 0))
H12 = ((1, 0, 2, 2), (0, 1, 2, 2), (0, 0, -1, 0), (0, 0, 0, -1))
print("M132 =", M132, element_order(M132))
print("H12 order:", element_order(H12))

gens = [("M132", M132), ("H12", H12)] + permutation_matrices(4)
for k in (1, 2):
    print(f"words of length <= {k}: {len(enumerate_words(gens, k))}")

t = time.perf_counter()
D = dirichlet_domain(L, (1, 1, 1, 1), gens, 2)
print(f"{len(D.normals)} halfspaces, {len(D.rays)} rays in {time.perf_counter() - t:.2f}s")
for r in D.rays:
    print("  ", r)
