# %% [markdown]
# # Geometric Vandermonde polynomials and Fermat sections
#
# Evaluating a Wronskian on monomials z^alpha at the point (1, ..., 1) gives a
# Vandermonde-type determinant in the exponent vectors.

# %%
from geowronskian.wordcomb import WordSet, canonical_size, canonical_weight, foliation_ratio
from geowronskian.vandermonde import eval_V, key_identity_check, zero_set_certify

U = WordSet(1, ((1,), (2,)))
print(eval_V(U, [[0], [1], [2]]), key_identity_check(U, [(0,), (1,), (2,)]))

rep = zero_set_certify(2, 2, samples=20, seed=1)
print(rep["ok"], rep["totals"])

# %% [markdown]
# Weight of the canonical set U_n against its size: the average word length
# approaches p/(p+1) of n.

# %%
for p in (1, 2, 3):
    n = 40
    print(p, canonical_weight(p, n) / (n * canonical_size(p, n)), p / (p + 1))
print([float(foliation_ratio(1, 1, n)) for n in (100, 1000, 10000)])

# %% [markdown]
# Fermat sections: every full set of size N-1 either uses all letters or
# yields a Wronskian that vanishes on the graph components.

# %%
from geowronskian.fermat import FermatConfig, fermat_report, degree_report

rep = fermat_report(FermatConfig(3, 2, 4))
for row in rep["sets"]:
    print(row["set"], row["part"], row["factor"]["exponents"], row.get("fminus"))
print(degree_report(3, 1)["threshold"])
