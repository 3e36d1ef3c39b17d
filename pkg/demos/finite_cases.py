"""Movable cones from their inequalities, plus the two P1 x V anomalies.

The d > 1 inequalities cut out a strictly larger cone than the one claimed;
the verifier flags that instead of failing.
"""

from k3cones.cone import cone_from_facets
from k3cones.scenarios import load_scenario, run_builtin

for name in ("p1xp3", "quadric-cone", "p1xV:1", "p1xV:2"):
    s = load_scenario(name)
    mov = s.expected["mov"]
    C = cone_from_facets(mov["inequalities"], len(s.labels))
    print(f"{name:14} labels {list(s.labels)} rays {list(C.rays)} ({mov['mode']})")

print()
print(run_builtin("p1xV:2").to_text())
