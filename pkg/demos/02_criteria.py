# BIC, UBIC and ICOMP on the per-size best models.
import numpy as np

from pdesel import CandidateLibrary, best_subsets, bic, estimate_ifim_inverse, icomp, max_info_complexity, quantify_default, ubic
from pdesel.criteria import relative_scores, select

rng = np.random.default_rng(1)
n = 400
Phi = rng.standard_normal((n, 6))
y = Phi[:, [0, 3]] @ [1.0, -0.6] + 0.2 + 0.3 * rng.standard_normal(n)
lib = CandidateLibrary(Phi, [f"c{j}" for j in range(6)], y)
fits = best_subsets(lib, 6)

# BIC charges log N per active term
b = [bic(f) for f in fits]
print("BIC relative:", np.round(relative_scores(b), 2))

# UBIC adds the quantified uncertainty to the parameter count
us = [quantify_default(f, lib, n_boot=100, seed=0) for f in fits]
print("U:", [round(u.raw, 2) for u in us])
ub = [ubic(f, u.raw) for f, u in zip(fits, us)]
print("UBIC relative:", np.round(relative_scores(ub), 2))

# the complexity of a covariance matrix is zero only when every eigenvalue is equal
print("C(I) =", max_info_complexity(np.eye(3)).value)
print("C(diag(1, 4)) =", round(max_info_complexity(np.diag([1.0, 4.0])).value, 5))

# ICOMP replaces the parameter count with that complexity, scaled by 2 a_N.
# Near-orthogonal columns keep C small, so the penalty here is weak
for f in fits[:3]:
    cov = estimate_ifim_inverse(f, lib)
    print(f.support, "C =", round(max_info_complexity(cov).value, 3))

for a_n in (1.0, np.log(n)):
    scores = [icomp(f, lib, a_n) for f in fits]
    best = fits[select(fits, [s.total for s in scores])]
    print(f"ICOMP a_N={a_n:.2f} picks", lib.names(best.support))
print("BIC picks", lib.names(fits[select(fits, [s.total for s in b])].support))
