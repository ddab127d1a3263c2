"""
Word-level entailment: where vectors succeed and operators object
=================================================================

A specific word ("goldfish"-like) is seen in a strict subset of the
contexts of a general word ("fish"-like).  On plain context
distributions that inclusion makes the KL divergence finite in the
specific-to-general direction, so the graded entailment score
1 / (1 + divergence) is high.  Density matrices also record which
contexts co-occur with each other; if the correlations disagree, the
operator divergence blows up even though the vector one does not.
"""

import numpy as np

from entailkit.measures import (
    kl_divergence,
    quantum_relative_entropy,
    representativeness_kl,
    representativeness_vn,
    support_inclusion,
)
from entailkit.tensor_core import DensityMatrix

# three contexts: tank, garden, water
general_vec = np.array([1.0, 1.0, 1.0]) / 3.0
specific_vec = np.array([0.0, 0.5, 0.5])

print("context distributions")
print("  general :", general_vec)
print("  specific:", specific_vec)

print("\nKL divergence")
print("  specific -> general:", kl_divergence(specific_vec, general_vec))
print("  general -> specific:", kl_divergence(general_vec, specific_vec))

r_fwd = representativeness_kl(specific_vec, general_vec)
r_bwd = representativeness_kl(general_vec, specific_vec)
print("\nrepresentativeness (vector route)")
print(f"  specific -> general: {r_fwd.value:.4f}  diverged={r_fwd.diverged}")
print(f"  general -> specific: {r_bwd.value:.4f}  diverged={r_bwd.diverged}")

# the asymmetry is the entailment direction: the specific word is
# representative of the general one, not the other way around

# now the operator picture.  The general word's density couples its
# last two contexts (they always co-occur); the specific word's does not.
general_dm = DensityMatrix(np.array([[1.0, 0, 0], [0, 1, 1], [0, 1, 1]]) / 3.0)
specific_dm = DensityMatrix(np.diag([0.0, 0.5, 0.5]))

print("\nsupport inclusion (operator route)")
print("  specific <= general:", support_inclusion(specific_dm, general_dm))
print("  general <= specific:", support_inclusion(general_dm, specific_dm))

print("\nquantum relative entropy")
print("  specific -> general:", quantum_relative_entropy(specific_dm, general_dm))
print("  general -> specific:", quantum_relative_entropy(general_dm, specific_dm))

q_fwd = representativeness_vn(specific_dm, general_dm)
print("\nrepresentativeness (operator route)")
print(f"  specific -> general: {q_fwd.value:.4f}  diverged={q_fwd.diverged}")

# same marginals, opposite verdicts: the diagonal of general_dm is the
# uniform distribution above, but its off-diagonal correlations are not
# realised by the specific word, so the operator measure refuses the
# entailment that the vector measure grants.
