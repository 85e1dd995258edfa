"""Matrix-unit images of the truncated AF generators."""

from __future__ import annotations

from graphent import build_finite, full_window, materialize, salama_2_8
from graphent.af import (
    PhiRepresentation,
    dimension_report,
    omega,
    rank_bound_sequences,
    verify_homomorphism,
    verify_independence,
)

two_cycle = build_finite(["a", "b"], [("e1", "a", "b"), ("e2", "b", "a")])
w = full_window(two_cycle)

gens = omega(w, "a", 1)
rep = PhiRepresentation(w, "a", 1)
for x in gens:
    m = rep.image(x)
    print(x, "->", m.dim, "x", m.dim, "with", len(m.entries), "nonzero entries")

print(verify_homomorphism(w, "a", 3).passed, verify_independence(w, "a", 3).passed)

# omega has 2 elements but r(1)^2 = 4, so the image is a proper subalgebra
print(dimension_report(w, "a", 1).to_dict())

# on E_{2,8}, r(n) grows like 2^n
win = materialize(salama_2_8()[0], ["0"], 20)
r, k = rank_bound_sequences(win, "0", 20)
print("r(n):", r.counts[:10])
print("k_n:", k.counts[:10])
