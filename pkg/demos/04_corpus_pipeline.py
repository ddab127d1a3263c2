"""
From raw sentences to entailment scores
=======================================

The full model-building pipeline on a corpus small enough to check by
hand: co-occurrence counts -> PMI weighting -> nonnegative
factorisation into dense vectors -> relational verb matrices from
attested arguments -> density operators from context mixtures -> phrase
scores.
"""

import numpy as np

from entailkit.composition import compose_phrase_density, compose_phrase_vector
from entailkit.measures import representativeness_kl, representativeness_vn
from entailkit.model_build import (
    build_density_word,
    build_verb_matrices,
    context_occurrences,
    count_cooccurrences,
    nmf,
    pmi_weight,
)
from entailkit.tensor_core import normalize_l1

# a corpus with a planted regularity: terriers only ever do dog things,
# dogs do everything terriers do and more
corpus = [
    "the terrier chased the ball in the park".split(),
    "the terrier chewed a bone in the park".split(),
    "a dog chased the ball in the park".split(),
    "a dog chewed a bone in the garden".split(),
    "the dog guarded the house at night".split(),
    "people walked the dog in the garden".split(),
    "people fed the terrier a bone".split(),
    "people fed the dog a bone".split(),
]

targets = ["terrier", "dog", "ball", "bone", "people", "chased", "chewed", "fed"]
contexts = sorted({w for s in corpus for w in s})

# 1. counts and PMI
counts = count_cooccurrences(corpus, targets, contexts, window=3)
print("count matrix shape:", counts.counts.shape)
weighted = pmi_weight(counts)
print("nonzero PMI cells :", int(np.count_nonzero(weighted)))

# 2. factorise to k-dimensional nonnegative vectors
model = nmf(weighted, k=4, seed=0)
vectors = {w: model.W[i] for i, w in enumerate(targets)}
print("objective trace   :", [round(e, 3) for e in model.objective_trace[:5]], "...")
for w in ("terrier", "dog"):
    print(f"  {w:8s}", np.round(vectors[w], 3))

# divergences expect distributions, so compare L1-normalised copies
r = representativeness_kl(normalize_l1(vectors["terrier"]), normalize_l1(vectors["dog"]))
print(f"terrier -> dog representativeness: {r.value:.4f} diverged={r.diverged}")

# 3. verb matrices from dependency attestations (relation, noun, count)
dependencies = {
    "chased": [("obj", "ball", 2)],
    "chewed": [("obj", "bone", 2)],
    "fed": [("obj", "terrier", 1), ("obj", "dog", 1), ("subj", "people", 2)],
}
matrices = build_verb_matrices(dependencies, vectors)
print("\nverb matrices built:", sorted(matrices))
print("'fed' built from", len(matrices["fed"].argument_vectors), "arguments")

# 4. density operators: context mixtures keep who-occurs-with-whom.
# every context word needs an embedding, so fall back to zero for the
# function words NMF never saw as targets
basis = {w: vectors.get(w, np.zeros(4)) for w in contexts}


def density(word):
    return build_density_word(
        context_occurrences(corpus, word, window=3), basis, label=word
    )


terrier_dm, dog_dm = density("terrier"), density("dog")
rq = representativeness_vn(terrier_dm, dog_dm)
print(f"\nterrier -> dog operator representativeness: {rq.value:.4f} "
      f"diverged={rq.diverged}")

# 5. compose and compare two phrases under both routes
lhs = compose_phrase_vector(matrices["chased"], vectors["ball"])
rhs = compose_phrase_vector(matrices["fed"], vectors["dog"])
pr = representativeness_kl(normalize_l1(lhs), normalize_l1(rhs))
print(f"\n'chased ball' -> 'fed dog' (vectors)  : {pr.value:.4f}")

lhs_dm = compose_phrase_density(density("chased"), density("ball"))
rhs_dm = compose_phrase_density(density("fed"), dog_dm)
pq = representativeness_vn(lhs_dm, rhs_dm)
print(f"'chased ball' -> 'fed dog' (operators): {pq.value:.4f}")
