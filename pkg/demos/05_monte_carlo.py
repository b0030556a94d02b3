# %% [markdown]
# # Monte Carlo study
#
# Each replicate simulates data, tunes by CV, refits and scores the test
# split.  Five replicates keep this quick; the command line tool runs 100
# by default (`kfpls benchmark`).

# %%
from kfpls.benchmark import run_benchmark
from kfpls.simgen import ScenarioSpec

for scenario, case in [(1, 1), (1, 2), (2, 1), (3, 1)]:
    res = run_benchmark(ScenarioSpec(scenario, case, n_train=200, seed=0), n_replicates=5)
    tr, te = res.train.format(), res.test.format()
    print(f"S{scenario} case {case}: train RASE {tr[0]}  test RASE {te[0]}  test ARPE {te[1]}")
