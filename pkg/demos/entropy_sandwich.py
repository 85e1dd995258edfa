"""Growth-rate estimates and the lower/upper entropy sandwich."""

from __future__ import annotations

import math

from graphent import salama_2_8, salama_pp, sandwich
from graphent.entropy import block_entropy, coblock_entropy, loop_entropy
from graphent.graph import materialize

oracle, desc = salama_2_8()
w = materialize(oracle, ["0"], 120)
for f in (loop_entropy, block_entropy, coblock_entropy):
    est = f(w, "0", 120)
    print(f"{est.quantity:8s} {est.value:.6f} nats  (stride {est.stride}, n in {est.n_range})")
print("closed forms:", desc.known_entropies)

# the two sides stay apart on E_{2,8}: log 2 below, log 8 above
rep = sandwich(oracle, "0", 120, 0.05)
print(f"\nE_2,8   lower {rep.lower:.4f}  upper {rep.upper:.4f}  exact={rep.exact}")

# for the E_p members they meet at log p
for p in (2, 3, 5):
    rep = sandwich(salama_pp(p)[0], "0", 120, 0.05)
    print(f"E_{p}     lower {rep.lower:.4f}  upper {rep.upper:.4f}  exact={rep.exact}  log p = {math.log(p):.4f}")
