# %% [markdown]
# # Choosing q and gamma by cross-validation

# %%
import numpy as np

from kfpls.kernel import KernelSpec
from kfpls.kpls import FitConfig, fit
from kfpls.metrics import rase
from kfpls.simgen import ScenarioSpec, generate
from kfpls.tuning import CvPlan, grid_search

data = generate(ScenarioSpec(scenario=3, n_train=200, seed=4))
cv = grid_search(data.train, CvPlan(n_folds=5, seed=4))
print(f"selected q={cv.best_q}, gamma={cv.best_gamma:.4g}, CV score {cv.best_score:.5f}")

# %%
np.set_printoptions(precision=4, suppress=True, linewidth=140)
print("CV scores (rows q = 1..8, columns gamma = 1e-3 .. 1e2):")
print(cv.scores)

# %%
model = fit(data.train, KernelSpec("gaussian", cv.best_gamma), FitConfig(cv.best_q))
print("test RASE:", rase(model.predict(data.test), data.test.responses))
