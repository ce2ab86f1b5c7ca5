"""
Truncated representations and Toeplitz decay
============================================

The bounded representations are built as numpy matrices.  We look at
relation residuals, the trace of the grading against closed forms, and how
fast pi(C) approaches a pure shift down the diagonal.
"""

import numpy as np

from weighted_heegaard import WeightPair
from weighted_heegaard.chern import tau_symbolic
from weighted_heegaard.reps import RepSpec, relation_residual, tau_numeric, toeplitz_compactness

w = WeightPair(2, 3)

# %%
# Residuals of the defining relations, restricted to columns the cut-off
# cannot reach.
spec = RepSpec(w, "series1", 1, N=200)
for name, r in relation_residual(spec).items():
    print(f"{name:24} {r['residual']:.1e}")

# %%
# Tr(gamma pi(A^2)) against the closed form.
partial, tail = tau_numeric(w, 1, 0, "A", 2, 0, 400)
closed = tau_symbolic("A", 2, 0, 1, 0, w)
print(f"partial {partial:.15f}  closed {closed} = {closed.evaluate():.15f}  tail {tail:.1e}")

# %%
# Column norms of pi(C) minus the shift decay geometrically with ratio p^l.
r = toeplitz_compactness(RepSpec(w, "series1", 0, N=60))
print("shift:", r["shift"], " predicted cut-off column:", r["predicted_index"])
with np.printoptions(precision=2):
    print(np.asarray(r["norms"][:12]))
