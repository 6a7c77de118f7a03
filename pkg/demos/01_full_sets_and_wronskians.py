# %% [markdown]
# # Full sets and generalized Wronskians
#
# Words in p letters are exponent vectors.  A set of words is *full* when it
# is closed under taking subwords, i.e. an order ideal of N^p minus the origin.

# %%
from geowronskian.wordcomb import enumerate_full_sets, word_set_from_letters
from geowronskian.polyring import parse_poly, format_poly
from geowronskian.wronskian import eval_wronskian, is_geometric

for U in enumerate_full_sets(2, 2):
    print(U, "k =", U.k, "w =", U.w, "beta =", U.beta)

# %% [markdown]
# A Wronskian stacks the functions and their partial derivatives, one row per
# word.  On 1, z1, z2 with U = {1, 2} the matrix is upper triangular.

# %%
U = word_set_from_letters(["1", "2"], 2)
fs = [parse_poly(s, 2) for s in ("1", "z1", "z2")]
print(format_poly(eval_wronskian(U, fs)))

# %% [markdown]
# Full sets give Wronskians that transform like sections: multiplying every
# function by g multiplies W by g^(m+1).  The non-full set {1, 12} does not,
# and the randomized test returns an explicit counterexample.

# %%
print(is_geometric(word_set_from_letters(["1", "2", "12"], 2)).geometric)
res = is_geometric(word_set_from_letters(["1", "12"], 2), "randomized")
print(res.geometric, res.certificate["counterexample"])
