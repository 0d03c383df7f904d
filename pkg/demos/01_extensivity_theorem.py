"""Extensivity and the degenerate direction of the entropy Hessian.

A homogeneous (extensive) entropy forces its Hessian metric to be
degenerate along the scaling field x -> lambda x, and conversely: the
metric annihilates the scaling field exactly when the potential is
extensive up to an additive constant.  This script walks through both
directions on the builtin models.
"""

import numpy as np

from hessiometric import builtin, load_model
from hessiometric.geometry import (euler_defect, gibbs_duhem_residual,
                                   hessian_metric, kernel)

np.set_printoptions(precision=6, suppress=True)

print("=== Hessian metric of the monatomic ideal gas at (U,V,N)=(1,1,1) ===")
gas = builtin("ideal_gas")
mf = hessian_metric(gas, [1, 1, 1])
print(mf.g)

print("\nEigenvalues:", np.linalg.eigvalsh(mf.g))
kb = kernel(mf)
print("rank =", kb.rank, " kernel direction =", kb.basis[0],
      " (the scaling direction (1,1,1)/sqrt(3))")

print("\n=== Forward direction: extensive => metric kills the scaling field ===")
for name in ("ideal_gas", "paramagnet"):
    model = builtin(name)
    point = np.array([1.3, 0.4, 0.9]) if name == "paramagnet" \
        else np.array([1.3, 0.7, 2.1])
    res = gibbs_duhem_residual(hessian_metric(model, point))
    defect = euler_defect(model, point)
    print(f"{name:<12} residual |g.rho|/(|g||rho|) = {res:.2e}   "
          f"Euler defect rho(Phi)-Phi = {defect:+.2e}")

print("\n=== Converse: a non-homogeneous perturbation is detected ===")
doc = """{
  "name": "perturbed_gas",
  "coordinates": ["U", "V", "N"],
  "entropy": "N*ln(V*U^1.5*N^(-2.5)) - 0.01*U^2",
  "domain": ["U", "V", "N"]
}"""
perturbed = load_model(doc)
for point in ([1, 1, 1], [2, 1, 1], [1, 2, 3]):
    res = gibbs_duhem_residual(hessian_metric(perturbed, point))
    defect = euler_defect(perturbed, point)
    print(f"at {point}: residual = {res:.3e}   defect = {defect:+.4f}"
          "  (no longer constant)")

print("\nAn additive entropy constant S0 shifts the defect but keeps it "
      "constant:")
shifted = builtin("ideal_gas", S0=5.0)
for point in ([1, 1, 1], [2, 3, 7]):
    print(f"  defect at {point} = {euler_defect(shifted, point):+.6f}")
