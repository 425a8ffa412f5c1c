# %% [markdown]
# Nilradicals of the canonical sequence
#
# For a shape d = (d_1, ..., d_k) we build the canonical block sequence C,
# generate n(C) from E(C) and its ad D(0,0) iterates, and read off the lower
# central series.  The nilpotency degree is then compared with the closed
# form prediction.

# %%
from solvnil import Shape, canonical_seq, generate_nilradical
from solvnil.nilradical import rank_table
from solvnil.theory import predict_degree_canonical

# %%
for d in [(1, 1, 1, 1), (1, 3, 1), (2, 3, 2), (1, 2, 1, 2, 1), (3, 5, 3, 4)]:
    shape = Shape(d)
    rep = generate_nilradical(canonical_seq(shape))
    pred = predict_degree_canonical(shape)
    print(f"{str(d):18} dim {rep.dim:3}  lcs {rep.lcs_dims}  degree {rep.degree}"
          f"  predicted {pred.predicted_degree} [{pred.case_tag}]")

# %% [markdown]
# Block ranks: r_ij is the minimal nonzero rank of the (i, j) block over
# homogeneous elements.  Adjacent blocks always have rank 1 and the corner
# block r_1k takes one of three values depending on the shape.

# %%
table = rank_table(Shape((2, 3, 2, 3)))
print(table.to_json())
print("r_1k =", table.r1k)
