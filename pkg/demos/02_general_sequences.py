# %% [markdown]
# Arbitrary block sequences, normal forms and phi-invariance
#
# Conjugating by the block-diagonal group G(d) does not change n(S) up to
# isomorphism, so every sequence can be brought to a normal form T.  On
# odd-symmetric shapes with ends of size 1 the degree drops by one exactly
# when T is invariant under the anti-transpose phi.

# %%
from solvnil import Shape, generate_nilradical, normalize_seq, random_seq
from solvnil.blockstruct import is_phi_invariant, random_group_elem

shape = Shape((1, 2, 1, 2, 1))
s = random_seq(shape, seed=7, entry_bound=3, constraint="none")
gauge, t = normalize_seq(s)
print("input     ", s.dumps())
print("normalized", t.dumps())

# %% Conjugating first gives the same normal form.
p = random_group_elem(shape, seed=11, entry_bound=3)
print("same normal form after conjugation:", normalize_seq(p.conjugate(s)).seq == t)

# %%
for constraint in ("normalized", "normalized_phi_invariant"):
    seq = random_seq(shape, seed=3, entry_bound=3, constraint=constraint)
    print(f"{constraint:26} phi-invariant={is_phi_invariant(seq)!s:5} "
          f"degree={generate_nilradical(seq).degree}")
