"""Walk through the P3 x P3 case by hand, one library call per step.

Run with ``python3 demos/p3xp3_walkthrough.py``.
"""

from k3cones import exact
from k3cones.chow import ChowRing, curve_genus, fiber_gram
from k3cones.cone import cone_from_rays, covers, quotient_image
from k3cones.lattice import (
    IntLattice,
    certify_no_norm,
    disc_action,
    discriminant_group,
    element_order,
    is_isometry,
    positive_cone_boundary,
    torelli_check,
)
from k3cones.scenarios import load_scenario

ring = ChowRing(("L1", "L2"), 6, ((4, 0), (0, 4)), {(3, 3): 1})
H = ring.parse("L1 + L2")
gram = fiber_gram(ring, ring.gens(), H)
print("Picard lattice of the fiber:", gram)
print("genus of the base curve:", curve_genus(ring, H))

L = IntLattice(gram)
print("no (-2)-classes, certified mod", certify_no_norm(L, -2, 16))
lo, hi = positive_cone_boundary(L)
print("positive cone between slopes", lo, "and", hi)

M = ((21, 8), (-8, -3))
print("M is an isometry:", is_isometry(L, M))
print("order of M:", element_order(M))
print("discriminant group:", discriminant_group(L).factors)
print("action on L*/L:", disc_action(L, M)[1])
print("Torelli verdict:", torelli_check(L, M))
print("M sends (-1,3) to", exact.matvec(M, (-1, 3)))

# lift the fundamental domain back to N^1 of the blowup
s = load_scenario("p3xp3")
target = cone_from_rays(s.quotient.target, 2)
images = [quotient_image(s.nef_cone(m), s.quotient.matrix) for m in s.sqms]
for m, img in zip(s.sqms, images):
    print(f"q(Nef({m.name})) has rays {img.rays}")
print(covers(target, images))
