# %% [markdown]
# # Spectra data: random 165/50 splits
#
# Point `TECATOR` at a Tecator spectra file (100 absorbances then the fat
# content on each row).  Without it, a synthetic stand-in with the same
# shape is used so the script still runs.

# %%
import os

import numpy as np

from kfpls.benchmark import run_random_splits
from kfpls.fdata import FunctionalDataset, Grid, rescale_domain
from kfpls.files import load_spectra

path = os.environ.get("TECATOR")
if path:
    ds = load_spectra(path)
else:
    rng = np.random.default_rng(0)
    wl = np.linspace(850, 1050, 100)
    fat = rng.uniform(1, 50, 215)
    peak = np.exp(-((wl - 930) ** 2) / 800)
    X = 2.5 + 0.02 * fat[:, None] * peak + 0.01 * rng.normal(size=(215, 100)).cumsum(axis=1)
    ds = rescale_domain(FunctionalDataset([Grid(wl)], [X], fat))

res = run_random_splits(ds, n_splits=3, seed=0)
print("split sizes:", {(r.train.n, r.test.n) for r in res.replicates})
tr, te = res.train.format(), res.test.format()
print(f"train RASE {tr[0]} ARPE {tr[1]} | test RASE {te[0]} ARPE {te[1]}")
