"""
A tour of the divergences and their graded entailment scores
============================================================

Classical measures act on probability vectors, quantum ones on density
matrices; on diagonal matrices the two families agree exactly.  Each
divergence maps to a degree of entailment through 1 / (1 + divergence).
"""

import numpy as np

from entailkit.measures import (
    Representativeness,
    alpha_skew,
    jensen_shannon,
    kl_divergence,
    quantum_js,
    quantum_relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from entailkit.tensor_core import DensityMatrix, eig_sym

p = np.array([0.5, 0.5, 0.0])
q = np.array([0.25, 0.5, 0.25])

print("p =", p)
print("q =", q)
print()
print("shannon entropy H(p)     :", shannon_entropy(p))
print("shannon entropy H(q)     :", shannon_entropy(q))
print("KL(p || q)               :", kl_divergence(p, q))
print("KL(q || p)               :", kl_divergence(q, p), " (support violation)")

# the skewed variant stays finite by mixing a little of p into q;
# Jensen-Shannon symmetrises and is bounded by ln 2
print("alpha-skew(q -> p, 0.99) :", alpha_skew(q, p))
print("jensen-shannon(p, q)     :", jensen_shannon(p, q))

for name, d in [("KL", kl_divergence(p, q)), ("JS", jensen_shannon(p, q))]:
    r = Representativeness.from_divergence(d)
    print(f"entailment degree from {name}: {r.value:.4f}")

# quantum analogues on density matrices
rho = DensityMatrix(np.diag(p))
sigma = DensityMatrix(np.diag(q))
print()
print("von Neumann N(diag p)            :", von_neumann_entropy(rho))
print("quantum rel. entropy (diag pair) :", quantum_relative_entropy(rho, sigma))
print("quantum JS (diag pair)           :", quantum_js(rho, sigma))
# identical to the classical numbers above: diagonal operators commute,
# so the spectral definitions collapse to the probability-vector ones

# a genuinely non-diagonal state: the uniform superposition projector
plus = np.full((2, 2), 0.5)
mixed = np.eye(2) / 2.0
print()
print("projector onto (1,1)/sqrt(2):")
print(plus)
spec = eig_sym(np.array(plus))
print("its spectrum:", np.round(spec.eigenvalues, 12))
print("N(projector)       :", von_neumann_entropy(DensityMatrix(plus)))
print("N(maximally mixed) :", von_neumann_entropy(DensityMatrix(mixed)))
print("rel. entropy projector -> mixed:",
      quantum_relative_entropy(DensityMatrix(plus), DensityMatrix(mixed)))
print("rel. entropy mixed -> projector:",
      quantum_relative_entropy(DensityMatrix(mixed), DensityMatrix(plus)))
# the mixed state's support is the full plane, the projector's is a line:
# finite one way, infinite the other
