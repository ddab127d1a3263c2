"""A synthetic corpus with planted entailment structure, end to end.

Three topic chains (animals, tools, documents) each carry a three-level
hyponym ladder for nouns and for transitive verbs, e.g. terrier < dog <
animal and groom < tend < keep.  Generality is planted distributionally:
a word at level L occurs with the first L+1 blocks of its chain's
features, so the specific word's contexts are a strict subset of the
general word's.
Graded pair judgements follow the ladder distance, which is exactly what
the compositional scorers are supposed to recover from the corpus alone.

Attribute sentences put one feature next to its owner and the counting
window stays at one token, so a word's counted contexts are exactly its
own features.  Event sentences separate the verb from its arguments with
background tokens: they feed the verb-argument attestations, while the
windowed counts never mix a word with its clause mates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EntailkitError
from .harness import (
    EvaluationReport,
    ExperimentConfig,
    ModelStore,
    PhraseEntailmentRecord,
    run_experiment,
)
from .model_build import (
    build_verb_matrices,
    context_occurrences,
    count_cooccurrences,
    density_accumulate,
    nmf,
    pmi_weight,
    store_densities,
    store_matrices,
    store_vectors,
)
from .tensor_core import DensityMatrix, normalize_trace, support_basis

__all__ = [
    "SyntheticWorld",
    "default_world",
    "generate_corpus",
    "generate_dataset",
    "build_models",
    "run_synthetic_experiment",
    "export_world",
]

# one-token windows keep counted contexts crisp: a word sees its own
# feature and nothing else, event arguments see only their padding
WINDOW = 1

# sampling pools for argument levels, indexed by verb level; uniform
# pools keep the argument span identical across verbs so phrase
# differences come from the words, not from attestation skew
_ARG_LEVELS = (
    (0, 1, 2),
    (0, 1, 2),
    (0, 1, 2),
)



@dataclass(frozen=True)
class SyntheticWorld:
    """Vocabulary tables: per chain, words ordered specific to general.

    Nouns and verbs of a chain share one feature ladder.  Keeping the
    contexts in a common pool matters: meanings only interact where their
    distributions overlap, and disjoint noun/verb context vocabularies
    would make every composed phrase blind to one of its two words.

    Each chain also carries two sibling words that live exclusively on
    the middle and top feature blocks.  They never enter the judged
    pairs; their job is to give every block a pure exemplar, which pins
    the factorisation onto one latent direction per block instead of an
    arbitrary mix the ladder rows alone cannot distinguish.
    """

    nouns: tuple[tuple[str, str, str], ...]
    verbs: tuple[tuple[str, str, str], ...]
    siblings: tuple[tuple[str, str], ...]
    chain_features: tuple[tuple[str, ...], ...]
    background: tuple[str, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for group in (
            *self.nouns,
            *self.verbs,
            *self.siblings,
            *self.chain_features,
            self.background,
        ):
            for w in group:
                if w in seen:
                    raise ValueError(f"duplicate vocabulary item {w!r}")
                seen.add(w)
        for feats in self.chain_features:
            if len(feats) % 3 != 0:
                raise ValueError("chain features must split into 3 levels")

    @property
    def n_chains(self) -> int:
        return len(self.nouns)

    def targets(self) -> list[str]:
        out = []
        for chain in range(self.n_chains):
            out.extend(self.nouns[chain])
            out.extend(self.verbs[chain])
            out.extend(self.siblings[chain])
        return out

    def features(self) -> list[str]:
        out: list[str] = []
        for chain in range(self.n_chains):
            out.extend(self.chain_features[chain])
        out.extend(self.background)
        return out

    def feature_set(self, chain: int, level: int) -> tuple[str, ...]:
        step = len(self.chain_features[chain]) // 3
        return self.chain_features[chain][: step * (level + 1)]

    def feature_block(self, chain: int, block: int) -> tuple[str, ...]:
        step = len(self.chain_features[chain]) // 3
        return self.chain_features[chain][step * block : step * (block + 1)]


def default_world() -> SyntheticWorld:
    return SyntheticWorld(
        nouns=(
            ("terrier", "dog", "animal"),
            ("chisel", "blade", "tool"),
            ("memo", "letter", "document"),
        ),
        verbs=(
            ("groom", "tend", "keep"),
            ("whittle", "shape", "make"),
            ("draft", "write", "produce"),
        ),
        siblings=(
            ("hound", "beast"),
            ("cutter", "implement"),
            ("report", "record"),
        ),
        chain_features=(
            ("bark", "leash", "fur", "tail",
             "paw", "snout", "collar", "kennel",
             "wild", "herd", "graze", "roam"),
            ("carve", "timber", "steel", "edge",
             "handle", "grind", "rasp", "jig",
             "bench", "rig", "gear", "fixture"),
            ("note", "desk", "page", "ink",
             "stamp", "margin", "clause", "folio",
             "file", "archive", "ledger", "registry"),
        ),
        background=("thing", "place", "time", "way"),
    )


def generate_corpus(
    world: SyntheticWorld,
    n_sentences: int = 5000,
    seed: int = 0,
) -> tuple[list[list[str]], dict[str, list[tuple[str, str, int]]]]:
    """Sample sentences and aggregate the verb-argument attestations.

    Attribute sentences pair a word with one feature from its level's
    prefix; event sentences are laid out [obj, pad, verb, pad, subj] so
    the one-token window never counts clause mates against each other.
    Argument levels are drawn uniformly, which keeps every remaining
    contamination path level-blind.
    """
    if n_sentences < 1:
        raise ValueError("need at least one sentence")
    rng = np.random.default_rng(seed)
    sentences: list[list[str]] = []
    dep_counts: dict[tuple[str, str, str], int] = {}
    n_chains = world.n_chains
    targets = world.targets()

    def pick(group):
        return group[int(rng.integers(len(group)))]

    for _ in range(n_sentences):
        u = rng.random()
        chain = int(rng.integers(n_chains))
        if u < 0.70:
            # one feature per attribute sentence, uniform over the word's
            # own feature set: features inside a level block are
            # interchangeable, so the extra block of a more general word
            # is a genuinely new context direction, not a reweighting.
            # ladder words draw from their prefix, siblings from exactly
            # one block
            r = int(rng.integers(8))
            if r < 6:
                level = r % 3
                ladder = world.nouns[chain] if r < 3 else world.verbs[chain]
                word = ladder[level]
                feats = world.feature_set(chain, level)
            else:
                block = r - 5
                word = world.siblings[chain][block - 1]
                feats = world.feature_block(chain, block)
            toks = [word, pick(feats)]
            if rng.random() < 0.1:
                toks.append(pick(world.background))
        elif u < 0.95:
            # events feed the verb-argument attestations only: padding
            # keeps clause mates out of each other's window, so densities
            # stay purely attribute-driven and support containment holds
            lv = int(rng.integers(3))
            pool = _ARG_LEVELS[lv]
            ls = int(pick(pool))
            lo = int(pick(pool))
            verb = world.verbs[chain][lv]
            subj = world.nouns[chain][ls]
            obj = world.nouns[chain][lo]
            toks = [obj, pick(world.background), verb, pick(world.background), subj]
            dep_counts[(verb, "subj", subj)] = (
                dep_counts.get((verb, "subj", subj), 0) + 1
            )
            dep_counts[(verb, "obj", obj)] = (
                dep_counts.get((verb, "obj", obj), 0) + 1
            )
        else:
            toks = [pick(targets), pick(world.background)]
        sentences.append(toks)
    dependencies: dict[str, list[tuple[str, str, int]]] = {}
    for (verb, rel, noun), count in sorted(dep_counts.items()):
        dependencies.setdefault(verb, []).append((rel, noun, count))
    return sentences, dependencies


# (name, lhs (verb level, noun level), rhs (verb level, noun level), degree)
# within one chain, verb-object order; rungs up the ladder stay entailing
# but weaken with distance, reversals and chain crossings sit near zero.
# same-verb pairs ride on the general verb: a verb only transmits noun
# distinctions it can cover, and they are what a verb-only scorer misses.
# direction is probed where composition can carry it, through the verb:
# with the verb fixed, additive mixtures bound the reverse penalty at
# ratio scale, so a same-verb reversal separates models by composition
# style rather than by the planted relation.
_WITHIN_PAIRS = (
    ("identical", (0, 0), (0, 0), 1.00),
    ("noun-up-1", (2, 0), (2, 1), 0.90),
    ("verb-up-1", (0, 0), (1, 0), 0.90),
    ("both-up-1", (0, 0), (1, 1), 0.78),
    ("noun-up-2", (2, 0), (2, 2), 0.78),
    ("mixed-up-3", (0, 0), (1, 2), 0.66),
    ("both-up-2", (0, 0), (2, 2), 0.54),
    ("both-rev-2", (1, 1), (0, 0), 0.22),
    ("mixed-rev-3", (2, 1), (0, 0), 0.16),
    ("both-rev-4", (2, 2), (0, 0), 0.10),
)

# subject-verb order exercises the other verb type; same ladder logic
_SV_PAIRS = (
    ("sv-up", (0, 0), (1, 1), 0.78),
    ("sv-rev", (2, 2), (0, 0), 0.10),
)


def generate_dataset(world: SyntheticWorld) -> list[PhraseEntailmentRecord]:
    """The graded pair judgements implied by the planted ladders.

    Degrees map onto the 1..7 annotation scale as 1 + 6 * degree.  The
    cross-chain pairs include same-verb traps ("keep terrier" against
    "keep chisel") that a verb-only scorer necessarily gets wrong.
    """
    records: list[PhraseEntailmentRecord] = []

    def add(rid, lhs, lhs_order, rhs, rhs_order, degree):
        records.append(
            PhraseEntailmentRecord(
                record_id=rid,
                lhs_tokens=lhs,
                lhs_order=lhs_order,
                rhs_tokens=rhs,
                rhs_order=rhs_order,
                human_score=1.0 + 6.0 * degree,
            )
        )

    for chain in range(world.n_chains):
        label = world.nouns[chain][2]
        verbs, nouns = world.verbs[chain], world.nouns[chain]
        for name, (lv, ln), (rv, rn), degree in _WITHIN_PAIRS:
            add(
                f"{label}-{name}",
                (verbs[lv], nouns[ln]),
                "verb-object",
                (verbs[rv], nouns[rn]),
                "verb-object",
                degree,
            )
        for name, (lv, ln), (rv, rn), degree in _SV_PAIRS:
            add(
                f"{label}-{name}",
                (nouns[ln], verbs[lv]),
                "subject-verb",
                (nouns[rn], verbs[rv]),
                "subject-verb",
                degree,
            )
    for chain in range(world.n_chains):
        other = (chain + 1) % world.n_chains
        label = f"{world.nouns[chain][2]}-{world.nouns[other][2]}"
        add(
            f"cross-{label}",
            (world.verbs[chain][0], world.nouns[chain][0]),
            "verb-object",
            (world.verbs[other][0], world.nouns[other][0]),
            "verb-object",
            0.04,
        )
        # same verb, foreign object: a verb-only scorer calls this a
        # perfect match, composition sees two phrases with no shared
        # distributional ground
        add(
            f"foreign-{label}",
            (world.verbs[chain][0], world.nouns[other][0]),
            "verb-object",
            (world.verbs[chain][0], world.nouns[chain][0]),
            "verb-object",
            0.04,
        )
    return records


def build_models(
    sentences,
    dependencies,
    world: SyntheticWorld,
    k: int = 9,
    seed: int = 0,
    vector_tol: float = 1e-2,
    density_floor: float = 5e-2,
) -> ModelStore:
    """Corpus to model store: counts, PPMI, NMF, verb matrices, densities.

    Word vectors are the NMF target factors sparsified at ``vector_tol``
    relative to each row's peak; the default rank gives each of the nine
    planted feature blocks a latent direction of its own.  Multiplicative updates leave stray mass
    in latent directions a word has nothing to do with, anywhere between
    literal zero and noise scale; snapping it to zero makes supports mean
    something, so unrelated phrases degenerate instead of landing on an
    arbitrary noise direction.

    Densities deliberately stay out of the latent space.  Their signal is
    support containment, and a chain's worth of contexts collapses to a
    couple of latent directions, where any handful of occurrence vectors
    spans everything and the containment order drowns.  Building them
    over the full word-by-word PPMI matrix keeps each feature block a
    direction of its own, so the general word's extra contexts are mass
    the specific word simply does not have.

    Each word's density is smoothed toward a flat operator on its own
    chain's context subspace instead of toward the identity.  The
    smoothing is what keeps within-chain comparisons between
    differently-supported phrases finite; it has to be flat because the
    verb sandwich roughly cubes the floor's eigenvalues, and the raw
    mixture of feature contexts carries near-parallel directions whose
    small eigenvalues would drop below the support cutoff.  Restricting
    the floor to the chain keeps it from building a bridge between
    chains: a phrase pairing a verb with a foreign object has no
    distributional ground at all and stays degenerate.  Background
    tokens are left out of the context map for the same reason; their
    rows are padding artefacts shared by every chain.
    """
    if not 0.0 <= density_floor < 1.0:
        raise ValueError("density floor must be in [0, 1)")
    if not 0.0 <= vector_tol < 1.0:
        raise ValueError("vector tolerance must be in [0, 1)")
    targets = world.targets()
    features = world.features()
    counts = count_cooccurrences(sentences, targets, features, window=WINDOW)
    weighted = pmi_weight(counts)
    # multiplicative updates only find a local optimum; restart a few
    # times and keep the factorisation with the lowest residual
    model = min(
        (nmf(weighted, k=k, max_iter=500, seed=seed * 101 + i) for i in range(8)),
        key=lambda m: m.objective_trace[-1],
    )
    store = ModelStore()
    for i, w in enumerate(targets):
        vec = model.W[i].copy()
        peak = float(vec.max())
        if peak <= 0.0:
            raise EntailkitError(f"{w!r} has an all-zero latent vector")
        vec[vec < vector_tol * peak] = 0.0
        store.vectors[w] = vec
    store.verb_matrices = build_verb_matrices(dependencies, store.vectors)

    # the density vocabulary excludes the padding tokens in both roles;
    # with them gone every zero count is a structural zero, the chains
    # occupy disjoint coordinate blocks, and a cross-chain sandwich is
    # exactly zero rather than merely small
    vocab = list(targets)
    for chain in range(world.n_chains):
        vocab.extend(world.chain_features[chain])
    sparse = pmi_weight(count_cooccurrences(sentences, vocab, vocab, window=WINDOW))
    density_contexts = {w: sparse[i] for i, w in enumerate(vocab)}
    dim = len(vocab)

    chain_floor: list[np.ndarray] = []
    word_chain: dict[str, int] = {}
    for chain in range(world.n_chains):
        span = np.zeros((dim, dim))
        for feat in world.chain_features[chain]:
            row = density_contexts[feat]
            span += np.outer(row, row)
        basis = support_basis(span / np.trace(span))
        chain_floor.append(basis @ basis.T / basis.shape[1])
        for w in (
            *world.nouns[chain],
            *world.verbs[chain],
            *world.siblings[chain],
        ):
            word_chain[w] = chain

    for word in targets:
        occ = context_occurrences(sentences, word, window=WINDOW)
        if not occ:
            raise EntailkitError(f"{word!r} never occurs in the corpus")
        raw = density_accumulate(occ, density_contexts)
        base = raw / np.trace(raw)
        floor = chain_floor[word_chain[word]]
        mixed = (1.0 - density_floor) * base + density_floor * floor
        store.densities[word] = normalize_trace(mixed, label=word)
    return store


def run_synthetic_experiment(
    n_sentences: int = 5000,
    seed: int = 0,
    k: int = 9,
    out: str = "",
) -> EvaluationReport:
    """Generate, build and evaluate in one go; deterministic in ``seed``."""
    world = default_world()
    sentences, dependencies = generate_corpus(world, n_sentences, seed=seed)
    store = build_models(sentences, dependencies, world, k=k, seed=seed)
    records = generate_dataset(world)
    config = ExperimentConfig(seed=seed, out=out)
    report = run_experiment(config, store=store, records=records)
    if out:
        report.write(out)
    return report


def export_world(
    dir_path: str,
    n_sentences: int = 5000,
    seed: int = 0,
    k: int = 9,
) -> dict[str, str]:
    """Write the corpus, attestations, dataset and built models to files.

    Everything the file-based pipeline needs lands under ``dir_path``;
    returns the path of each artefact by role.
    """
    import os

    os.makedirs(dir_path, exist_ok=True)
    world = default_world()
    sentences, dependencies = generate_corpus(world, n_sentences, seed=seed)
    store = build_models(sentences, dependencies, world, k=k, seed=seed)
    records = generate_dataset(world)
    paths = {
        "corpus": os.path.join(dir_path, "corpus.txt"),
        "dependencies": os.path.join(dir_path, "dependencies.tsv"),
        "dataset": os.path.join(dir_path, "dataset.tsv"),
        "vectors": os.path.join(dir_path, "vectors.txt"),
        "verb_matrices": os.path.join(dir_path, "verb_matrices.txt"),
        "densities": os.path.join(dir_path, "densities.txt"),
    }
    with open(paths["corpus"], "w", encoding="utf-8") as fh:
        for toks in sentences:
            fh.write(" ".join(toks) + "\n")
    with open(paths["dependencies"], "w", encoding="utf-8") as fh:
        for verb in sorted(dependencies):
            for rel, noun, count in dependencies[verb]:
                fh.write(f"{verb}\t{rel}\t{noun}\t{count}\n")
    with open(paths["dataset"], "w", encoding="utf-8") as fh:
        fh.write("# id\tlhs\tlhs order\trhs\trhs order\thuman score\n")
        for r in records:
            fh.write(
                f"{r.record_id}\t{' '.join(r.lhs_tokens)}\t{r.lhs_order}\t"
                f"{' '.join(r.rhs_tokens)}\t{r.rhs_order}\t{r.human_score}\n"
            )
    store_vectors(paths["vectors"], store.vectors)
    store_matrices(
        paths["verb_matrices"],
        {w: m.matrix for w, m in store.verb_matrices.items()},
    )
    store_densities(paths["densities"], store.densities)
    return paths
