# %% [markdown]
# # Gaussian Gram matrices and centering
#
# `gram` returns the raw kernel matrix and its double-centered version;
# `cross_gram` centers test rows against the training Gram.

# %%
import numpy as np

from kfpls.kernel import KernelSpec, cross_gram, gram
from kfpls.simgen import ScenarioSpec, generate

data = generate(ScenarioSpec(1, 1, n_train=30, n_test=5, seed=1))
spec = KernelSpec("gaussian", gamma=0.3)
G = gram(data.train, spec)
print("diagonal of K:", np.unique(np.diag(G.raw)))
print("largest |row sum| of Kc:", np.abs(G.centered.sum(axis=1)).max())
print("smallest eigenvalue of K:", np.linalg.eigvalsh(G.raw).min())

# %%
C = cross_gram(data.test, data.train, spec, G.raw)
print("cross Gram shape:", C.centered.shape, "row sums:", C.centered.sum(axis=1).round(12))

# %%
# Bandwidth controls how fast similarity decays with distance.
for gamma in (0.01, 0.1, 1.0, 10.0):
    K = gram(data.train, KernelSpec("gaussian", gamma)).raw
    print(f"gamma={gamma:>5}: mean off-diagonal kernel value {K[~np.eye(30, dtype=bool)].mean():.3f}")
