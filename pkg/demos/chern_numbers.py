"""
Chern numbers of the line bundles
=================================

The trace of E[n] is a polynomial g_n(z) in z = A.  Pairing it with the
trace cocycle gives an exact rational function of p, which collapses to -n.
The same number is then recovered from truncated operator traces.
"""

from weighted_heegaard import WeightPair
from weighted_heegaard.bundles import trace_g
from weighted_heegaard.chern import chern_consistency, chern_number

w = WeightPair(1, 2)

# %%
# The trace polynomials grow quickly but stay exact.
for n in range(4):
    print(f"g_{n}(z) = {trace_g(w, n)}")

# %%
# Exact pairing, one value per choice of s.
for n in range(1, 5):
    print(n, [str(chern_number(w, n, s)) for s in range(w.l)])

# %%
# Numeric cross-check at p = 0.5 with N = 200 basis vectors per block.
for n in (1, 2, 3):
    r = chern_consistency(w, n, s=1, N=200)
    print(f"n={n}: numeric {r['numeric']:+.12f}  delta {r['delta']:.1e}  tail bound {r['tail_bound']:.1e}")

# %%
# With l < 0 the value is computed the same way but nothing is asserted.
print("(2,-3):", [str(chern_number(WeightPair(2, -3), n)) for n in (1, 2, 3)])
