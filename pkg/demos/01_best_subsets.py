# Best-subset least squares on a small synthetic library.
import itertools

import numpy as np

from pdesel import CandidateLibrary, best_subsets, fit_subset

rng = np.random.default_rng(0)
Phi = rng.standard_normal((200, 6))
xi_true = np.array([1.5, 0.0, -0.8, 0.0, 0.0, 0.3])
y = Phi @ xi_true + 0.4 + 0.1 * rng.standard_normal(200)
lib = CandidateLibrary(Phi, ["a", "b", "c", "d", "e", "f"], y)

# one fit on a chosen support; the intercept is always fitted separately
fit = fit_subset(lib, lib.indices(["a", "c"]))
print("support", lib.names(fit.support), "coef", fit.coefficients.round(3), "intercept", round(fit.intercept, 3))
print("rss", round(fit.rss, 4), "log L", round(fit.log_likelihood, 3))

# the exhaustive search returns the minimum-RSS model of every size
for f in best_subsets(lib, 6):
    print(f.support_size, lib.names(f.support), f"{f.rss:.4f}")

# greedy forward selection gives nested supports and can miss the optimum
forward = best_subsets(lib, 3, strategy="forward")
print("forward:", [lib.names(f.support) for f in forward])

# cross-check the size-2 winner against brute force
brute = min(itertools.combinations(range(6), 2), key=lambda s: fit_subset(lib, s).rss)
print("brute force size 2:", lib.names(brute))

# collinear supports are refused rather than silently fitted
dup = CandidateLibrary(np.column_stack([Phi[:, 0], 2 * Phi[:, 0]]), ["a", "2a"], y)
try:
    fit_subset(dup, [0, 1])
except Exception as exc:
    print(type(exc).__name__, exc)
