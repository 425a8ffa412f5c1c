# %% [markdown]
# When is n(S) free nilpotent?
#
# n(S) is free g-generated N-step nilpotent iff its lower central series
# quotients match the Witt dimensions of the free Lie algebra.  We compare
# the computed quotients with the Witt formula for a handful of shapes.

# %%
from solvnil import Shape, canonical_seq
from solvnil.theory import free_check, witt_dim

print("Witt dims for 3 generators:", [witt_dim(3, m) for m in range(1, 5)])

# %%
for d in [(1, 1, 1), (2, 1, 2), (2, 1, 1, 2), (2, 1, 2, 1, 2), (3, 1, 1, 3), (2, 3)]:
    prof = free_check(canonical_seq(Shape(d)))
    print(f"{str(d):16} {prof.verdict:9} quotients {prof.quotient_dims}  witt {prof.witt_dims}"
          f"  predicted {prof.predicted_verdict}")
