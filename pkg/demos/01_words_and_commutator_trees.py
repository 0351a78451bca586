"""Free-group machinery: reduced words, the parity-map kernel, and
commutator trees.

The dynamical systems studied by this package are generated by three
involutions x, y, z with no other relations.  This demo walks through
the combinatorial layer: word reduction, the Schreier generators of the
kernel of the parity map onto (Z/2)^3, iterated-commutator levels, and
the two growth estimates (fast ramification and commutator-tree
branching) that make the analytic arguments work.
"""

from k3gaps import words as W
from k3gaps.words import Word

print("== reduced words ==")
w = Word.parse("x y y x z")
print(f"'x y y x z' reduces to: {w}")
print(f"length {len(w)}, inverse {w.inverse()}  (involutions are self-inverse)")

print()
print("== parity map and its kernel ==")
print("klein_image sends a word to its letter-count parities in (Z/2)^3;")
print("the kernel is the subgroup acting without the orientation flips.")
for text in ("x y", "x y x y", "x x"):
    print(f"  klein_image({text!r:12}) = {W.klein_image(Word.parse(text))}")

gens = W.schreier_generators()
print(f"Schreier generators of the kernel ({len(gens)} of them):")
for g in gens:
    assert W.klein_image(g) == (0, 0, 0)
    print(f"  {g}")

print()
print("== derived levels ==")
print("Level n+1 consists of commutators [u, v] of distinct level-n")
print("elements; trivial commutators are omitted.  Counts explode, so")
print("levels beyond the first few are enumerated lazily by prefix.")
seeds = W.abstract_generators(2)
for n in (0, 1, 2):
    level = W.derived_level(seeds, n)
    print(f"  level {n}: {len(level)} elements, e.g. {level[0].word}")
prefix = W.level_prefix(seeds, 3, 4)
print(f"  level 3 (lazy prefix of 4): {[str(t.word) for t in prefix]}")

print()
print("== growth estimates ==")
rep = W.verify_fast_ramification(5, trials=2000, max_n=40, seed=0)
print(
    f"fast ramification (products of N commutators reduce to >= 2N+2 "
    f"letters): ok={rep.ok}, min slack {rep.min_slack} over {rep.trials} trials"
)
tree = W.tree_path_count(3)
print(
    f"commutator-tree branching through depth 3: per-level minimum "
    f"{tree.per_level_min}, giving >= {tree.lower_bound} distinct leaves"
)
