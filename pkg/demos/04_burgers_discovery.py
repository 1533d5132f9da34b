# Recover Burgers' equation from simulated data with ICOMP.
import numpy as np

from pdesel import LibrarySpec, SweepConfig, build_library, compute_derivatives, discovery_sweep, render_pde, simulate_burgers

nu = 0.1
fd = simulate_burgers(nu, (-8.0, 8.0, 256, 10.0, 101))
print("field", fd.u.shape, "dx", round(fd.dx, 4), "dt", fd.dt)

# the solver output should satisfy the PDE under the library's own stencils
d = compute_derivatives(fd, LibrarySpec(max_deriv_order=2))
res = d["u_t"] + fd.u * d[1] - nu * d[2]
ok = np.isfinite(res)
print("relative residual", np.sqrt(np.mean(res[ok] ** 2) / np.mean(d["u_t"][ok] ** 2)))

lib = build_library(fd, LibrarySpec(), n_samples=10000, seed=0, target_noise=0.01)
print(lib.n_terms, "terms:", ", ".join(lib.column_names))

sweep = discovery_sweep(lib, 8, SweepConfig(a_n=(1.0, "logN"), n_boot=100, seed=0))
for row in sweep.rows:
    s = row["scores"]
    print(
        f"k={row['k']}  C={row['complexity']['value']:6.2f}  U={row['uncertainty']['raw']:5.2f}  "
        f"ICOMP(1)={s['ICOMP(1)']['total']:.1f}  ICOMP(logN)={s['ICOMP(logN)']['total']:.1f}  {row['terms']}"
    )

fits = {f.support: f for f in sweep.fits}
for label, support in sweep.selected.items():
    print(f"{label:>12}: {render_pde(fits[tuple(support)], lib.column_names)}")
print("complexity nondecreasing:", sweep.complexity_nondecreasing)
