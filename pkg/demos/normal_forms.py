"""
Normal forms on the Heegaard 3-sphere
=====================================

Words in a, a*, b, b* reduce to ``H^h a^{#mu} b^{#nu}`` with H one of 1, A, B.
This walk-through builds a few elements and checks the weighted sphere
relations for one weight pair.
"""

from weighted_heegaard import WeightPair, make_generators, normalize, parse_word, verify_sphere_relations

# %%
# A handful of words and their normal forms.
for word in ["a* a", "a a*", "b a", "A B", "a^2 a*^3", "b* b^2 a"]:
    print(f"{word:12} ->  {normalize(parse_word(word))}")

# %%
# The generators of the weighted sphere for (k, l) = (2, 3).
w = WeightPair(2, 3)
g = make_generators(w)
print("C   =", g.C)
print("C*C =", g.Cs * g.C)
print("CC* =", g.C * g.Cs)

# %%
# Every defining relation holds exactly.
for check in verify_sphere_relations(w):
    print(f"{'ok ' if check.passed else 'BAD'} {check.name}")
