# UBIC of a model equals plain BIC of an overparameterized twin.
import numpy as np

from pdesel import CandidateLibrary, augment, fit_subset, verify_identity
from pdesel.equivalence import random_instance, run_battery, summarize
from pdesel.uncertainty import from_raw

rng = np.random.default_rng(2)
Phi = rng.standard_normal((120, 3))
lib = CandidateLibrary(Phi, ["p", "q", "r"], Phi @ [1.0, -2.0, 0.5] + 3.0 + 0.1 * rng.standard_normal(120))
fit = fit_subset(lib, [0, 1, 2])

# U = 2.3 rounds to 2, so three extra columns carry the intercept between them
aug = augment(fit, lib, 2)
print("augmented shape", aug.matrix.shape, "nonzeros", aug.l0)
print("extra columns, first row:", aug.matrix[0, 3:], "intercept", round(fit.intercept, 4))
print("same predictions:", np.allclose(aug.predict(), lib.target - fit.residuals))

rep = verify_identity(fit, lib, from_raw(2.3))
print(f"UBIC {rep.ubic_total:.6f}  BIC(aug) {rep.bic_aug_total:.6f}  |diff| {rep.abs_diff:.1e}  pass {rep.passed}")

# a coefficient perturbation breaks the identity, as a negative control
bad = verify_identity(fit, lib, from_raw(2.3), perturbation=1e-3)
print("perturbed pass:", bad.passed)

# the randomized battery used by `pdesel verify-equivalence`
print(summarize(run_battery(200, seed=0)))

fit2, lib2, u2 = random_instance(np.random.default_rng(7))
print("random instance: N =", lib2.n_samples, "k =", fit2.support_size, "U =", u2.rounded)
