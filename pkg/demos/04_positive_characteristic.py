# %% [markdown]
# Positive characteristic
#
# The canonical sequence has integer entries, so it also makes sense over
# F_p.  Binomial coefficients that vanish mod p can collapse the nilradical:
# constant shapes (p, ..., p) give abelian n(C).

# %%
from solvnil import GF, Shape, canonical_seq, generate_nilradical
from solvnil.sweep import charp_sweep

for p in (2, 3, 5):
    r = generate_nilradical(canonical_seq(Shape((p,) * 4), GF(p)))
    print(f"({p},)*4 over F{p}: dim {r.dim}, degree {r.degree}")

# %%
r = generate_nilradical(canonical_seq(Shape((2, 3, 2, 3, 2)), GF(2)))
print("(2,3,2,3,2) over F2:", r.dim, r.lcs_dims, r.degree)

# %% A small sweep: shapes whose degree is lower than in characteristic 0.
m = charp_sweep([2, 3], k_min=2, k_max=4, d_max=3, pattern="grid", dim_cap=9)
for f in m.findings[:10]:
    print(f)
print(len(m.findings), "drops among", len(m.results), "instances")
