"""Exact path counts on a finite graph and on a window of an infinite one."""

from __future__ import annotations

from graphent import PathClass, build_finite, count_class, first_return_counts, full_window, materialize, salama_2_8

# golden-mean graph: a self-loop at a and a two-cycle a <-> b
fib = build_finite(["a", "b"], [("e1", "a", "a"), ("e2", "a", "b"), ("e3", "b", "a")])
w = full_window(fib)
for cls in PathClass:
    print(f"{cls.value:12s}", count_class(w, "a", cls, 8).counts)

# the E_{2,8} graph is infinite; counts up to length n only need the radius-n ball
oracle, desc = salama_2_8()
win = materialize(oracle, ["0"], 24)
print("\nwindow:", len(win.graph.vertices), "vertices,", win.graph.n_edges, "edges")

rs = count_class(win, "0", PathClass.RANGE_STAR, 24)
print("range-star at 4k:", [rs.counts[4 * k] for k in range(1, 7)])

# first returns to 0 sit at lengths 1 and 4k+1
f = first_return_counts(win, "0", 21)
print("first returns:", {m: f.counts[m] for m in f.support()})
