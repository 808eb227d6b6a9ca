"""Walk through the Reissner-Nordstrom point m = q = 1, r = 2.

Builds the chart, prints the warped invariants and the classification, then
checks the Roter constants and the condition lattice.
"""
import numpy as np

from pseudocurv import catalog as cat
from pseudocurv import pseudosym as ps
from pseudocurv.classify import classify_pack
from pseudocurv.curvature import warped_components

fam = cat.build("reissner_nordstrom", {"m": 1.0, "q": 1.0})
point = {"t": 0.0, "r": 2.0}
pack, inv = warped_components(fam.chart, point)

print(f"n = {pack.n}, kappa = {pack.kappa:+.3e}")
print(f"tau1 = {inv.tau1:.6g}  rho = {inv.rho:.6g}  phi = {inv.phi:.6g}")

flags = classify_pack(pack)
print("classification:", ", ".join(flags.labels()) or "(none)")
rf = flags.roter
print("Roter constants:", {k: round(v, 9) for k, v in rf.coefficients.items()})
print("E = lambda C, lambda =", flags.e_c.coefficients["lambda"])

print("\nlattice")
for box in ps.lattice(pack):
    mark = {True: "yes", False: "no ", None: "n/a"}[box["holds"]]
    print(f"  [{mark}] {box['box']}")

# closed forms for the warped coefficients; the R.S basis has rank one here
c = ps.warped_coefficients(pack.n, pack.kappa, inv.tau1, inv.rho, inv.phi)
fit = ps.fit_ricci_three_term(pack)
print("\nR.S three-term fit:", fit.status, {k: round(v, 6) for k, v in fit.coefficients.items()})
print("closed-form triple:", {k: c[k] for k in ("alpha3", "alpha4", "alpha5")})
print("rank of S:", np.linalg.matrix_rank(pack.S))
