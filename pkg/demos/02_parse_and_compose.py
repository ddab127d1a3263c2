"""
Parsing and composing: grammar types drive the tensor contraction
=================================================================

Word meanings live in tensor powers of the noun space, one index per
factor of the word's grammatical type.  A successful type reduction
tells the engine which index pairs to contract; the surviving indices
carry the phrase meaning.
"""

import numpy as np

from entailkit.composition import (
    WordTensor,
    compose_phrase_vector,
    contract_vectors,
    vector_plan,
    verb_tensor,
)
from entailkit.model_build import build_relational_verb
from entailkit.pregroup import basic, make_standard_lexicon, parse, reduce

N = basic("n")
S = basic("s")

# 1. grammar: a transitive sentence reduces to the sentence type
lexicon = make_standard_lexicon(("n", "s"))
lexicon.add("dogs", "noun")
lexicon.add("cats", "noun")
lexicon.add("chase", "tverb")
result = parse(["dogs", "chase", "cats"], lexicon, S)
print("sentence: dogs chase cats")
print("  word types:", " | ".join(str(t) for t in result.word_types))
print("  contracted index pairs:", result.reduction.links)
print("  surviving indices:", result.reduction.surviving)
print("  alternative parses:", result.alternatives)

# 2. semantics: a verb matrix built from the verb's attested objects
dim = 3
chase_vec = np.array([2.0, 1.0, 4.0])
prey = [np.array([0.0, 1.0, 1.0]), np.array([0.0, 0.0, 2.0])]
chase = build_relational_verb(chase_vec, prey, [3.0, 1.0], label="chase")
print("\nverb matrix for 'chase':")
print(chase.matrix)

cats = np.array([0.0, 0.5, 0.5])

# closed form: element-wise verb vector times the argument blend
closed = compose_phrase_vector(chase, cats)
print("\n'chase cats' (closed form)     :", closed)

# 3. the same phrase through the generic contraction engine
types = [S * N.l, N]
words = [verb_tensor(chase.matrix, "verb-object"), WordTensor(cats, N)]
plan = vector_plan(reduce(types, S))
engine = contract_vectors(words, plan)
print("'chase cats' (engine contract) :", engine.data)
print("surviving type:", engine.type)

assert np.allclose(closed, engine.data)

# 4. word order matters only through the type: the subject-verb layout
# transposes the verb matrix and reduces on the other side
sv_types = [N, N.r * S]
sv_words = [WordTensor(cats, N), verb_tensor(chase.matrix, "subject-verb")]
sv_plan = vector_plan(reduce(sv_types, S))
print("\n'cats chase' (subject-verb)    :", contract_vectors(sv_words, sv_plan).data)
