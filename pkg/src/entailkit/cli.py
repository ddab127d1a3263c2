"""Command-line front end.

Subcommands mirror the library pipeline: build distributional models from
a corpus, compose phrases, score an entailment pair, run a full
evaluation, or check the composition-preserves-entailment property on
random densities.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .composition import (
    compose_additive,
    compose_multiplicative,
    compose_phrase_density,
    compose_phrase_vector,
    verify_proposition,
)
from .errors import EntailkitError
from .harness import (
    MODEL_NAMES,
    ExperimentConfig,
    load_config,
    run_experiment,
)
from .measures import (
    alpha_skew,
    kl_divergence,
    quantum_relative_entropy,
    representativeness_kl,
    representativeness_vn,
)
from .model_build import (
    build_verb_matrices,
    context_occurrences,
    count_cooccurrences,
    build_density_word,
    load_dependencies,
    load_matrices,
    load_vectors,
    nmf,
    pmi_weight,
    read_corpus,
    store_densities,
    store_matrices,
    store_vectors,
    load_densities,
)
from .model_build import RelationalVerbMatrix
from .tensor_core import normalize_l1

_FMT = "%.17g"


def _shared_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=0, help="RNG seed")
    parent.add_argument(
        "--tol-support",
        type=float,
        default=1e-12,
        help="support cutoff for classical divergences",
    )
    parent.add_argument(
        "--tol-eig",
        type=float,
        default=1e-10,
        help="relative eigenvalue cutoff for density supports",
    )
    parent.add_argument(
        "--alpha", type=float, default=0.99, help="skew parameter"
    )
    parent.add_argument(
        "--models",
        default="",
        help=f"comma-separated subset of {','.join(MODEL_NAMES)}",
    )
    parent.add_argument("--out", default="", help="output path")
    return parent


def _load_word_list(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [w for line in fh for w in line.split()]


def _corpus_vocab(corpus_path: str) -> list[str]:
    seen = {}
    for toks in read_corpus(corpus_path):
        for t in toks:
            seen[t] = True
    return sorted(seen)


def _cmd_build_vectors(args) -> int:
    sentences = list(read_corpus(args.corpus))
    vocab = _load_word_list(args.vocab) if args.vocab else _corpus_vocab(args.corpus)
    contexts = (
        _load_word_list(args.context_vocab) if args.context_vocab else vocab
    )
    counts = count_cooccurrences(sentences, vocab, contexts, window=args.window)
    model = nmf(pmi_weight(counts), k=args.k, seed=args.seed)
    vectors = {w: model.W[i] for i, w in enumerate(vocab)}
    if args.with_context_vectors:
        for j, c in enumerate(contexts):
            vectors.setdefault(c, model.H[:, j])
    store_vectors(args.out or "vectors.txt", vectors)
    print(f"{len(vectors)} vectors of dimension {args.k}")
    return 0


def _cmd_build_verb_matrices(args) -> int:
    vectors = load_vectors(args.vectors)
    deps = load_dependencies(args.dependencies)
    matrices = build_verb_matrices(deps, vectors)
    if not matrices:
        raise EntailkitError("no verb had both a vector and usable arguments")
    store_matrices(args.out or "verb_matrices.txt", {
        w: m.matrix for w, m in matrices.items()
    })
    print(f"{len(matrices)} verb matrices")
    return 0


def _cmd_build_density(args) -> int:
    sentences = list(read_corpus(args.corpus))
    vectors = load_vectors(args.vectors)
    words = args.words or _load_word_list(args.words_file)
    densities = {}
    for word in words:
        occ = context_occurrences(sentences, word, window=args.window)
        densities[word] = build_density_word(occ, vectors, label=word)
    store_densities(args.out or "densities.txt", densities)
    print(f"{len(densities)} density operators")
    return 0


def _parse_phrase(tokens: list[str], order: str):
    if len(tokens) != 2:
        raise EntailkitError(f"expected 2 tokens, got {tokens!r}")
    if order == "verb-object":
        return tokens[0], tokens[1]
    if order == "subject-verb":
        return tokens[1], tokens[0]
    raise EntailkitError(f"unknown order {order!r}")


def _cmd_compose(args) -> int:
    verb, noun = _parse_phrase(args.tokens, args.order)
    if args.model == "categorical_vn":
        densities = load_densities(args.densities)
        phrase = compose_phrase_density(densities[verb], densities[noun])
        lines = [
            " ".join(_FMT % x for x in row) for row in phrase.matrix
        ]
    else:
        vectors = load_vectors(args.vectors)
        if args.model == "categorical_kl":
            matrices = load_matrices(args.verb_matrices)
            raw = compose_phrase_vector(
                RelationalVerbMatrix(matrix=matrices[verb], label=verb),
                vectors[noun],
            )
            raw = normalize_l1(raw)
        elif args.model == "additive_kl":
            raw = compose_additive(vectors[verb], vectors[noun])
        else:
            raw = compose_multiplicative(vectors[verb], vectors[noun])
        lines = [" ".join(_FMT % x for x in raw)]
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _phrase_meaning(args, tokens, order):
    verb, noun = _parse_phrase(tokens, order)
    if args.model == "categorical_vn":
        densities = load_densities(args.densities)
        return compose_phrase_density(densities[verb], densities[noun])
    vectors = load_vectors(args.vectors)
    if args.model == "categorical_kl":
        matrices = load_matrices(args.verb_matrices)
        return normalize_l1(
            compose_phrase_vector(
                RelationalVerbMatrix(matrix=matrices[verb], label=verb),
                vectors[noun],
            )
        )
    if args.model == "additive_kl":
        return compose_additive(vectors[verb], vectors[noun])
    return compose_multiplicative(vectors[verb], vectors[noun])


def _cmd_entail(args) -> int:
    lhs = _phrase_meaning(args, args.lhs.split(), args.lhs_order)
    rhs = _phrase_meaning(args, args.rhs.split(), args.rhs_order)
    if args.model == "categorical_vn":
        divergence = quantum_relative_entropy(lhs, rhs, eig_tol=args.tol_eig)
        rep = representativeness_vn(lhs, rhs, eig_tol=args.tol_eig)
    elif args.measure == "alpha-skew":
        divergence = alpha_skew(lhs, rhs, alpha=args.alpha)
        rep = representativeness_kl(lhs, rhs)
    else:
        divergence = kl_divergence(lhs, rhs, support_tol=args.tol_support)
        rep = representativeness_kl(lhs, rhs, support_tol=args.tol_support)
    print(f"divergence: {divergence}")
    print(f"representativeness: {rep.value:.6f}" + (" (diverged)" if rep.diverged else ""))
    return 0


def _cmd_experiment(args) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    for key in ("dataset", "vectors", "verb_matrices", "dependencies", "densities"):
        value = getattr(args, key.replace("-", "_"), "")
        if value:
            setattr(config, key, value)
    if args.models:
        config.models = tuple(m.strip() for m in args.models.split(","))
    if args.out:
        config.out = args.out
    config.seed = args.seed
    report = run_experiment(config)
    if config.out:
        report.write(config.out)
        print(f"report written to {config.out}")
    else:
        print(report.to_text())
    return 0


def _cmd_verify_proposition(args) -> int:
    report = verify_proposition(
        trials=args.trials,
        dim=args.dim,
        phrase_len=args.phrase_len,
        seed=args.seed,
        negative_control=args.negative_control,
    )
    text = report.to_json() if args.json else report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    # a control run succeeds by catching every planted violation
    if args.negative_control:
        return 0 if report.failures == report.trials else 1
    return 0 if report.failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parent = _shared_flags()
    parser = argparse.ArgumentParser(
        prog="entailkit",
        description="graded entailment for compositional distributional meanings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "build-vectors",
        parents=[parent],
        help="corpus counts -> PPMI -> NMF word vectors",
    )
    p.add_argument("corpus")
    p.add_argument("--vocab", default="", help="file listing target words")
    p.add_argument("--context-vocab", default="", help="file listing context words")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("-k", type=int, default=20, help="latent dimension")
    p.add_argument(
        "--with-context-vectors",
        action="store_true",
        help="also store latent vectors for context words",
    )
    p.set_defaults(func=_cmd_build_vectors)

    p = sub.add_parser(
        "build-verb-matrices",
        parents=[parent],
        help="relational verb matrices from attested arguments",
    )
    p.add_argument("--vectors", required=True)
    p.add_argument("--dependencies", required=True)
    p.set_defaults(func=_cmd_build_verb_matrices)

    p = sub.add_parser(
        "build-density",
        parents=[parent],
        help="density operators from context occurrences",
    )
    p.add_argument("corpus")
    p.add_argument("--vectors", required=True)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("words", nargs="*", help="target words")
    p.add_argument("--words-file", default="")
    p.set_defaults(func=_cmd_build_density)

    def phrase_flags(p):
        p.add_argument("--vectors", default="")
        p.add_argument("--verb-matrices", default="")
        p.add_argument("--densities", default="")
        p.add_argument(
            "--model",
            default="categorical_kl",
            choices=[m for m in MODEL_NAMES if m != "baseline_verb"],
        )

    p = sub.add_parser(
        "compose", parents=[parent], help="compose a two-word phrase meaning"
    )
    phrase_flags(p)
    p.add_argument("tokens", nargs=2)
    p.add_argument(
        "--order", default="verb-object", choices=["verb-object", "subject-verb"]
    )
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser(
        "entail", parents=[parent], help="graded entailment between two phrases"
    )
    phrase_flags(p)
    p.add_argument("lhs", help="entailing phrase, space separated")
    p.add_argument("rhs", help="entailed phrase, space separated")
    p.add_argument("--lhs-order", default="verb-object")
    p.add_argument("--rhs-order", default="verb-object")
    p.add_argument(
        "--measure", default="kl", choices=["kl", "alpha-skew"],
        help="classical divergence to report (vector models)",
    )
    p.set_defaults(func=_cmd_entail)

    p = sub.add_parser(
        "experiment", parents=[parent], help="evaluate models against a dataset"
    )
    p.add_argument("--config", default="", help="key=value config file")
    p.add_argument("--dataset", default="")
    p.add_argument("--vectors", default="")
    p.add_argument("--verb-matrices", dest="verb_matrices", default="")
    p.add_argument("--dependencies", default="")
    p.add_argument("--densities", default="")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser(
        "verify-proposition",
        parents=[parent],
        help="composition preserves entailment on random densities",
    )
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--phrase-len", type=int, default=2, choices=[2, 3])
    p.add_argument("--negative-control", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify_proposition)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EntailkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
