# %% [markdown]
# # Superfields and the supersymmetric minimal surface equation
#
# Graded expressions, the operators D1, D2, Q1, Q2 and the two ways of writing
# the equation: as a composition of covariant derivatives and in explicit
# components.

# %%
import sympy as sp

from susyms.grassmann import GradedExpr, odd_const, theta1, theta2
from susyms.serialize import serialize
from susyms.supercalculus import (apply_word, check_operator_identities, expand_superfield,
                                  extension_difference, jet, supersymmetry_transform)

T1, T2 = GradedExpr.atom(theta1), GradedExpr.atom(theta2)
mu = odd_const("mu")
print(serialize(T2 * T1), "|", serialize((mu * T1) * (mu * T2)))

# %% [markdown]
# The superfield and its covariant derivatives.

# %%
Phi = jet("Phi")
print(serialize(expand_superfield(Phi)))
print(serialize(apply_word(["D1", "D1"], Phi)), "|", serialize(apply_word(["Q1", "Q1"], Phi)))

# %% [markdown]
# All ten (anti)commutation relations hold on a generic superfield.

# %%
for name, ok in check_operator_identities().items():
    print(f"{name:16s} {ok}")

# %% [markdown]
# The operator form and the component form agree after expansion.  Reading the
# factor in the first product as a plain -Phi_yy*theta1*theta2 leaves a nonzero
# difference, so the derivative form is the one used throughout.

# %%
print("difference:", serialize(extension_difference()))
print("literal reading:", serialize(extension_difference(literal=True))[:120], "...")

# %% [markdown]
# Finite supersymmetry transformation x -> x - tau*theta1, theta1 -> theta1 + tau.

# %%
tau = odd_const("tau")
print(serialize(supersymmetry_transform(GradedExpr.scalar(sp.Symbol("x") ** 2) * T2, 1, tau)))
