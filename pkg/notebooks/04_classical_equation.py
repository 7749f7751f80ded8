# %% [markdown]
# # The classical minimal surface equation

# %%
import numpy as np

from susyms.classical import (classical_classify, classical_normalize, euler_lagrange_check,
                              reduce_classical, symmetry_report, verify_helicoidal_abel,
                              verify_radial_abel, verify_radial_fd)

for name, res in symmetry_report().items():
    print(f"{name:18s} {res}")
print(euler_lagrange_check())

# %% [markdown]
# One-dimensional subalgebras.  A generic element, with dilation and a
# rotation present, lands in {e7 + a e4}, a family beyond the four listed
# classes.

# %%
print(classical_classify(include_extra=True))
n = classical_normalize(np.random.default_rng(1).normal(size=7))
print(n.label, round(n.parameter, 6))

# %% [markdown]
# Reductions to Abel equations and the closed-form solutions.

# %%
for label in ("e4", "e4+me3"):
    print(reduce_classical(label).text)
for s0 in (0.5, 1.0, 2.0):
    fd = verify_radial_fd(s0)
    print(f"s0={s0}: FD {fd.max_residual:.2e} (plain {fd.extra['second_order_residual']:.2e}),"
          f" Abel {verify_radial_abel(s0).max_residual:.1e}")

# %% [markdown]
# The helicoidal profile as printed (absolute value in the first logarithm)
# fails its Abel equation; on the principal complex branch it holds.

# %%
print(verify_helicoidal_abel(1.0, 0.7, absolute=True).to_dict())
print(verify_helicoidal_abel(1.0, 0.7, absolute=False).to_dict())
