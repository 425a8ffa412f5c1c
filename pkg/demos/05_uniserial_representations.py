# %% [markdown]
# Uniserial representations of <x> + L(V)
#
# A block sequence S and scalars (alpha, lambda) give a representation with
# R(x) = D(alpha, lambda) and R(v_j) = (ad R(x) - lambda)^j E(S).  Its
# image nilradical has degree ell, so it factors through the ell-step
# truncation.  The enumerator lists which shapes occur.

# %%
from solvnil import Shape, generate_nilradical, random_seq
from solvnil.reps import (build_rep, enumerate_shapes, image_matches_h, quotient_level,
                          relations_hold, sample_seq, verify_uniserial)

seq = random_seq(Shape((1, 2, 1)), seed=0, entry_bound=3, constraint="normalized")
rep = build_rep(n=2, lam=1, alpha=0, seq=seq)
print("relations hold:", relations_hold(rep), " uniserial:", verify_uniserial(rep))
print("image = span{D} + n(S):", image_matches_h(rep), " level:", quotient_level(rep))

# %%
for r in enumerate_shapes(n=3, dim_total=6, ell=2):
    s = sample_seq(r, seed=1)
    print(r.to_json(), "-> degree", generate_nilradical(s).degree)

# %% All shapes of dimension 4 for n = 2.
print([r.shape.d_vec for r in enumerate_shapes(2, 4)])
