# %% [markdown]
# # Deciding linear dependence
#
# A family of polynomials is independent exactly when some Wronskian over a
# full set is nonzero.  The search scans full sets in canonical order.

# %%
from geowronskian.polyring import parse_poly, format_poly
from geowronskian.dependence import decide, distinct_order_reduction, rank_oracle

fam = [parse_poly(s, 2) for s in ("1", "z1", "z2", "z1*z2")]
out = decide(fam)
print(out["independent"], out["witness"], out["rank"])

dep = [parse_poly(s, 1) for s in ("1", "z1", "2*z1 + 3")]
print(decide(dep))

# %% [markdown]
# The proof reduces an independent family to one whose lowest-order terms are
# pairwise distinct, by a triangular change of basis A.

# %%
fam = [parse_poly(s, 1) for s in ("1", "1 + z1", "1 + z1 + z1^2")]
r = distinct_order_reduction(fam)
print([format_poly(t) for t in r.ts])
print([[str(x) for x in row] for row in r.A])
print(rank_oracle(fam))
