"""Entropy of finite pieces of an infinite graph, as the window grows."""

from __future__ import annotations

import math

from graphent import salama_2_8, subgraph_supremum

oracle, _ = salama_2_8()
radii = [5, 9, 13, 17, 21]
for r, h in zip(radii, subgraph_supremum(oracle, "0", radii)):
    print(f"radius {r:3d}: {h:.6f}  (gap to log 2: {math.log(2) - h:.2e})")
