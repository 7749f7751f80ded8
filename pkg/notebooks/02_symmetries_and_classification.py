# %% [markdown]
# # Symmetry superalgebra and its one-dimensional subalgebras

# %%
import sympy as sp

from susyms.classification import classify, normalize_to_representative, splitting_conjugator
from susyms.grassmann import odd_const
from susyms.serialize import serialize
from susyms.superalgebra import TABLE1_ORDER, susy_algebra, verify_decomposition

alg = susy_algebra()
print(alg.table.to_markdown(TABLE1_ORDER))

# %% [markdown]
# The table is produced by composing the vector fields, not looked up.  The
# decomposition into a dilation acting on three commuting blocks checks out.

# %%
rep = verify_decomposition()
print("decomposition ok:", rep.ok)

# %% [markdown]
# Adjoint action inside {P1, P3, Q1}: only the P1 coefficient moves.

# %%
r, alpha = sp.symbols("r alpha")
eta, lam, mu, nu = (odd_const(n) for n in ("eta", "lambda", "mu", "nu"))
out = alg.adjoint_action(alg.element(P1=r, P3=eta, Q1=lam), alg.element(P1=alpha, P3=mu, Q1=nu))
print(out)

# %% [markdown]
# Stage counts and the reflection-deduplicated list.

# %%
for stage in ("s1", "s2", "s", "tilde-s", "full", "deduped"):
    print(f"{stage:8s} {len(classify(stage))}")
print([c.label for c in classify("deduped") if not c.standard])

# %% [markdown]
# Normal forms: a conjugated element is carried back to its representative.

# %%
n = normalize_to_representative(alg.element(P1=3, P3=mu))
print(n.label, n.steps)

# %% [markdown]
# Classes with the dilation are conjugate to {D} under the full group of
# translations, odd ones included.

# %%
steps, D = splitting_conjugator(classify("full")[-1].element)
print(steps, "->", D)
