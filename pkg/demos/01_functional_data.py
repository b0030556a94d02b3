# %% [markdown]
# # Sampled curves and their geometry
#
# A subject carries `p` curves sampled on a shared grid.  Distances and
# inner products are trapezoid integrals over that grid.

# %%
import numpy as np

from kfpls.fdata import FunctionalDataset, Grid, pairwise_sq_distances, sq_l2_distance, trapezoid_integral

grid = Grid.uniform(101)
t = grid.points
print("integral of sin^2(2 pi t):", trapezoid_integral(np.sin(2 * np.pi * t) ** 2, grid))

# %%
# Three subjects, two predictors each.
x1 = np.stack([np.sin(2 * np.pi * t), np.cos(2 * np.pi * t), t])
x2 = np.stack([t ** 2, np.ones_like(t), np.zeros_like(t)])
ds = FunctionalDataset([grid, grid], [x1, x2], responses=[0.5, 1.0, -0.2])
print("squared distance, subjects 0 and 1:", sq_l2_distance(ds.sample(0), ds.sample(1)))
print(pairwise_sq_distances(ds).round(4))

# %%
# Real spectra come on a wavelength axis; map it to [0, 1] before fitting.
from kfpls.fdata import rescale_domain

nm = FunctionalDataset([Grid(np.linspace(850, 1050, 100))], [np.random.default_rng(0).normal(size=(4, 100))])
print("rescaled grid ends:", rescale_domain(nm).grids[0].points[[0, -1]])
