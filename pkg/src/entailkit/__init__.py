"""Graded entailment for compositional distributional meanings.

Words carry distributions (vectors) or density operators; grammatical
reductions compose them into phrase meanings; divergence-based measures
turn the comparison of two meanings into a degree of entailment.  The
package also builds such models from a corpus and evaluates them against
human judgements.
"""
from .composition import (
    ContractionPlan,
    PropositionReport,
    WordTensor,
    compose_additive,
    compose_multiplicative,
    compose_phrase_density,
    compose_phrase_vector,
    contract_densities,
    contract_vectors,
    cpm_mixed,
    cpm_pure,
    density_plan,
    execute_plan,
    vector_plan,
    verb_tensor,
    verify_proposition,
)
from .errors import (
    DatasetFormatError,
    DegeneratePhraseError,
    EntailkitError,
    ExperimentError,
    LexiconFormatError,
    MissingWordError,
    ModelIOError,
    UngrammaticalStringError,
    UnknownCategoryError,
)
from .harness import (
    MODEL_NAMES,
    EvaluationReport,
    ExperimentConfig,
    ModelStore,
    PhraseEntailmentRecord,
    binarize_gold,
    classification_metrics,
    load_config,
    load_dataset,
    optimize_threshold,
    run_experiment,
    score_pair,
    spearman,
)
from .measures import (
    Representativeness,
    alpha_skew,
    jensen_shannon,
    kl_divergence,
    quantum_js,
    quantum_relative_entropy,
    representativeness_kl,
    representativeness_vn,
    shannon_entropy,
    support_inclusion,
    von_neumann_entropy,
)
from .model_build import (
    CooccurrenceCounts,
    NmfModel,
    RelationalVerbMatrix,
    build_density_word,
    build_relational_verb,
    build_verb_matrices,
    context_occurrences,
    count_cooccurrences,
    density_accumulate,
    load_counts,
    load_densities,
    load_dependencies,
    load_matrices,
    load_vectors,
    nmf,
    pmi_weight,
    read_corpus,
    store_counts,
    store_densities,
    store_matrices,
    store_vectors,
)
from .pregroup import (
    Lexicon,
    ParseResult,
    PregroupType,
    Reduction,
    SimpleType,
    basic,
    check_reduction,
    make_standard_lexicon,
    parse,
    parse_type,
    reduce,
)
from .tensor_core import (
    DensityMatrix,
    Spectrum,
    WordVector,
    eig_sym,
    log_on_support,
    normalize_l1,
    normalize_trace,
    support_basis,
)
from .synthetic import (
    SyntheticWorld,
    default_world,
    generate_corpus,
    generate_dataset,
    run_synthetic_experiment,
)

__version__ = "0.1.0"
