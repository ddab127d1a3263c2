"""Evaluating phrase-entailment models against human judgements.

Five scorers share one convention: the score of a pair is the graded
representativeness of the left (entailing) phrase within the right
(entailed) one, in [0, 1].  Degenerate or diverged phrases score 0 rather
than being dropped.  Reports are plain text plus a JSON sidecar and are
byte-identical given the same configuration and seed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .composition import (
    compose_additive,
    compose_multiplicative,
    compose_phrase_density,
    compose_phrase_vector,
)
from .errors import (
    DatasetFormatError,
    DegeneratePhraseError,
    ExperimentError,
    MissingWordError,
)
from .measures import representativeness_kl, representativeness_vn
from .model_build import (
    RelationalVerbMatrix,
    build_verb_matrices,
    load_dependencies,
    load_densities,
    load_matrices,
    load_vectors,
)
from .tensor_core import DensityMatrix, normalize_l1

__all__ = [
    "MODEL_NAMES",
    "PhraseEntailmentRecord",
    "load_dataset",
    "ModelStore",
    "ModelPrediction",
    "score_pair",
    "spearman",
    "binarize_gold",
    "optimize_threshold",
    "Metrics",
    "classification_metrics",
    "ExperimentConfig",
    "load_config",
    "ModelEvaluation",
    "EvaluationReport",
    "run_experiment",
    "load_snapshot_fixture",
]

MODEL_NAMES = (
    "baseline_verb",
    "categorical_kl",
    "categorical_vn",
    "additive_kl",
    "multiplicative_kl",
)

_ORDERS = ("verb-object", "subject-verb")

#: judgements above the annotation-range midpoint count as entailment
GOLD_MIDPOINT = 4.0

_SCORE_CONVENTION = (
    "score = representativeness of the left (entailing) phrase within "
    "the right (entailed) one"
)


@dataclass(frozen=True)
class PhraseEntailmentRecord:
    """One evaluation pair: two 2-token phrases and a mean human score."""

    record_id: str
    lhs_tokens: tuple[str, str]
    lhs_order: str
    rhs_tokens: tuple[str, str]
    rhs_order: str
    human_score: float

    def __post_init__(self):
        for side, toks in (("lhs", self.lhs_tokens), ("rhs", self.rhs_tokens)):
            if len(toks) != 2 or not all(toks):
                raise ValueError(f"{side} must have exactly 2 tokens: {toks!r}")
        for side, order in (("lhs", self.lhs_order), ("rhs", self.rhs_order)):
            if order not in _ORDERS:
                raise ValueError(
                    f"{side} order must be one of {_ORDERS}, got {order!r}"
                )
        if not 1.0 <= self.human_score <= 7.0:
            raise ValueError(
                f"human score {self.human_score!r} outside [1, 7]"
            )

    @property
    def human_norm(self) -> float:
        """The score mapped from the 1..7 annotation scale onto [0, 1]."""
        return (self.human_score - 1.0) / 6.0

    def verb_and_noun(self, side: str) -> tuple[str, str]:
        toks = self.lhs_tokens if side == "lhs" else self.rhs_tokens
        order = self.lhs_order if side == "lhs" else self.rhs_order
        return (toks[0], toks[1]) if order == "verb-object" else (toks[1], toks[0])


def load_dataset(path) -> list[PhraseEntailmentRecord]:
    """Parse a phrase-pair TSV.

    Columns: id, lhs tokens (space separated), lhs order, rhs tokens,
    rhs order, human score.  ``#`` comments and blank lines are skipped.
    """
    records: list[PhraseEntailmentRecord] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.rstrip("\n")
            if not text.strip() or text.lstrip().startswith("#"):
                continue
            parts = text.split("\t")
            if len(parts) != 6:
                raise DatasetFormatError(
                    f"expected 6 tab-separated fields, got {len(parts)}",
                    path=path,
                    line_no=line_no,
                )
            rid, lhs, lorder, rhs, rorder, raw = (p.strip() for p in parts)
            try:
                score = float(raw)
            except ValueError:
                raise DatasetFormatError(
                    f"bad human score {raw!r}", path=path, line_no=line_no
                ) from None
            try:
                records.append(
                    PhraseEntailmentRecord(
                        record_id=rid,
                        lhs_tokens=tuple(lhs.split()),
                        lhs_order=lorder,
                        rhs_tokens=tuple(rhs.split()),
                        rhs_order=rorder,
                        human_score=score,
                    )
                )
            except ValueError as exc:
                raise DatasetFormatError(
                    str(exc), path=path, line_no=line_no
                ) from exc
    if not records:
        raise DatasetFormatError("no records in dataset", path=path, line_no=1)
    return records


@dataclass
class ModelStore:
    """Everything the scorers need: vectors, verb matrices, densities."""

    vectors: dict[str, np.ndarray] = field(default_factory=dict)
    verb_matrices: dict[str, RelationalVerbMatrix] = field(default_factory=dict)
    densities: dict[str, DensityMatrix] = field(default_factory=dict)

    def vector(self, word: str) -> np.ndarray:
        if word not in self.vectors:
            raise MissingWordError(word, "vector space")
        return self.vectors[word]

    def verb_matrix(self, word: str) -> RelationalVerbMatrix:
        if word not in self.verb_matrices:
            raise MissingWordError(word, "verb matrices")
        return self.verb_matrices[word]

    def density(self, word: str) -> DensityMatrix:
        if word not in self.densities:
            raise MissingWordError(word, "density operators")
        return self.densities[word]


@dataclass(frozen=True)
class ModelPrediction:
    """A model's graded score for one record; degenerate phrases score 0."""

    record_id: str
    model: str
    score: float
    degenerate: bool = False

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score!r} outside [0, 1]")
        if self.degenerate and self.score != 0.0:
            raise ValueError("degenerate predictions must score 0")


def _phrase_vector(record, side, store: ModelStore, model: str) -> np.ndarray:
    verb, noun = record.verb_and_noun(side)
    if model == "categorical_kl":
        raw = compose_phrase_vector(store.verb_matrix(verb), store.vector(noun))
    elif model == "additive_kl":
        raw = compose_additive(store.vector(verb), store.vector(noun))
    else:
        raw = compose_multiplicative(store.vector(verb), store.vector(noun))
    return normalize_l1(raw)


def score_pair(
    record: PhraseEntailmentRecord, model: str, store: ModelStore
) -> ModelPrediction:
    """Score one record under one model.

    Missing words raise MissingWordError for the caller to aggregate;
    degenerate compositions come back as score-0 predictions.
    """
    if model not in MODEL_NAMES:
        raise ValueError(f"unknown model {model!r}; known: {MODEL_NAMES}")
    try:
        if model == "baseline_verb":
            lv, _ = record.verb_and_noun("lhs")
            rv, _ = record.verb_and_noun("rhs")
            rep = representativeness_kl(
                normalize_l1(store.vector(lv)), normalize_l1(store.vector(rv))
            )
        elif model == "categorical_vn":
            lhs = compose_phrase_density(
                store.density(record.verb_and_noun("lhs")[0]),
                store.density(record.verb_and_noun("lhs")[1]),
            )
            rhs = compose_phrase_density(
                store.density(record.verb_and_noun("rhs")[0]),
                store.density(record.verb_and_noun("rhs")[1]),
            )
            rep = representativeness_vn(lhs, rhs)
        else:
            lhs = _phrase_vector(record, "lhs", store, model)
            rhs = _phrase_vector(record, "rhs", store, model)
            rep = representativeness_kl(lhs, rhs)
    except DegeneratePhraseError:
        return ModelPrediction(
            record_id=record.record_id, model=model, score=0.0, degenerate=True
        )
    return ModelPrediction(
        record_id=record.record_id, model=model, score=rep.value
    )


def _average_ranks(xs: np.ndarray) -> np.ndarray:
    order = np.argsort(xs, kind="stable")
    ranks = np.empty(len(xs))
    i = 0
    while i < len(xs):
        j = i
        while j + 1 < len(xs) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation: Pearson correlation of average ranks.

    Sequences shorter than 3 or with a constant side leave the
    correlation undefined and raise.
    """
    a = np.asarray(xs, dtype=float)
    b = np.asarray(ys, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("inputs must be equal-length 1-d sequences")
    if len(a) < 3:
        raise ValueError("need at least 3 points for a rank correlation")
    ra, rb = _average_ranks(a), _average_ranks(b)
    da, db = ra - ra.mean(), rb - rb.mean()
    denom = math.sqrt(float(da @ da) * float(db @ db))
    if denom == 0.0:
        raise ValueError("rank correlation undefined for constant input")
    return float(da @ db) / denom


def binarize_gold(records: Sequence[PhraseEntailmentRecord]) -> list[bool]:
    """Gold labels: strictly above the annotation midpoint is entailment."""
    return [r.human_score > GOLD_MIDPOINT for r in records]


def _confusion(scores, gold, threshold):
    tp = fp = tn = fn = 0
    for s, g in zip(scores, gold):
        positive = s > threshold
        if positive and g:
            tp += 1
        elif positive:
            fp += 1
        elif g:
            fn += 1
        else:
            tn += 1
    return tp, fp, tn, fn


def optimize_threshold(
    scores: Sequence[float], gold: Sequence[bool]
) -> tuple[float, float]:
    """The threshold (classify score > theta) maximising informedness.

    Candidates are the midpoints between consecutive distinct scores plus
    the two extremes; ties go to the smallest threshold.  Gold must
    contain both classes, otherwise informedness is undefined.
    """
    if len(scores) != len(gold) or not scores:
        raise ValueError("scores and gold must be equal-length and non-empty")
    if all(gold) or not any(gold):
        raise ValueError("gold labels are single-class; informedness undefined")
    distinct = sorted(set(float(s) for s in scores))
    candidates = [distinct[0] - 1.0]
    candidates += [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]
    candidates.append(distinct[-1])
    best_theta, best_j = candidates[0], -math.inf
    for theta in candidates:
        tp, fp, tn, fn = _confusion(scores, gold, theta)
        j = tp / (tp + fn) + tn / (tn + fp) - 1.0
        if j > best_j:
            best_theta, best_j = theta, j
    return best_theta, best_j


@dataclass(frozen=True)
class Metrics:
    informedness: float
    f1: float
    accuracy: float
    note: str = ""


def classification_metrics(
    scores: Sequence[float], gold: Sequence[bool], threshold: float
) -> Metrics:
    """Informedness, F1 and accuracy of thresholded scores.

    With no predicted positives F1 falls back to 0 and the note says so.
    """
    if len(scores) != len(gold) or not scores:
        raise ValueError("scores and gold must be equal-length and non-empty")
    if all(gold) or not any(gold):
        raise ValueError("gold labels are single-class; informedness undefined")
    tp, fp, tn, fn = _confusion(scores, gold, threshold)
    informedness = tp / (tp + fn) + tn / (tn + fp) - 1.0
    accuracy = (tp + tn) / len(scores)
    note = ""
    if tp + fp == 0:
        f1 = 0.0
        note = "no predicted positives; F1 reported as 0"
    else:
        precision = tp / (tp + fp)
        recall = tp / (tp + fn)
        f1 = (
            0.0
            if precision + recall == 0.0
            else 2.0 * precision * recall / (precision + recall)
        )
    return Metrics(informedness=informedness, f1=f1, accuracy=accuracy, note=note)


@dataclass
class ExperimentConfig:
    """Inputs for an evaluation run, usually parsed from a key=value file.

    ``thresholds_mode`` is either "optimize" or "fixed:<theta>".
    """

    dataset: str = ""
    vectors: str = ""
    verb_matrices: str = ""
    dependencies: str = ""
    densities: str = ""
    models: tuple[str, ...] = MODEL_NAMES
    thresholds_mode: str = "optimize"
    out: str = ""
    seed: int = 0
    alpha: float = 0.99

    def fixed_threshold(self) -> float | None:
        if self.thresholds_mode == "optimize":
            return None
        mode, _, value = self.thresholds_mode.partition(":")
        if mode != "fixed" or not value:
            raise ValueError(
                f"thresholds mode must be 'optimize' or 'fixed:<theta>', "
                f"got {self.thresholds_mode!r}"
            )
        return float(value)


def load_config(path) -> ExperimentConfig:
    """Parse a key=value config file ('#' comments, keys may use - or _)."""
    known = {
        "dataset": str,
        "vectors": str,
        "verb_matrices": str,
        "dependencies": str,
        "densities": str,
        "out": str,
        "thresholds_mode": str,
        "seed": int,
        "alpha": float,
    }
    cfg = ExperimentConfig()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            key, eq, value = text.partition("=")
            if not eq:
                raise DatasetFormatError(
                    f"expected key=value, got {text!r}", path=path, line_no=line_no
                )
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key == "models":
                names = tuple(m.strip() for m in value.split(",") if m.strip())
                unknown = [m for m in names if m not in MODEL_NAMES]
                if unknown or not names:
                    raise DatasetFormatError(
                        f"unknown models {unknown}", path=path, line_no=line_no
                    )
                cfg.models = names
            elif key in known:
                try:
                    setattr(cfg, key, known[key](value))
                except ValueError:
                    raise DatasetFormatError(
                        f"bad value for {key}: {value!r}", path=path, line_no=line_no
                    ) from None
            else:
                raise DatasetFormatError(
                    f"unknown config key {key!r}", path=path, line_no=line_no
                )
    cfg.fixed_threshold()  # validate the mode early
    return cfg


@dataclass(frozen=True)
class ModelEvaluation:
    model: str
    rho: float
    threshold: float
    informedness: float
    f1: float
    accuracy: float
    n_scored: int
    n_excluded: int
    notes: tuple[str, ...] = ()


@dataclass
class EvaluationReport:
    """A full evaluation: per-model statistics plus per-pair predictions."""

    evaluations: list[ModelEvaluation]
    records: list[PhraseEntailmentRecord]
    predictions: dict[str, dict[str, ModelPrediction]]
    thresholds: dict[str, float]
    config_echo: dict
    seed: int
    n_boundary_gold: int

    convention: str = _SCORE_CONVENTION

    def to_json_dict(self) -> dict:
        return {
            "convention": self.convention,
            "seed": self.seed,
            "config": self.config_echo,
            "dataset": {
                "n_records": len(self.records),
                "n_gold_positive": sum(binarize_gold(self.records)),
                "n_gold_boundary": self.n_boundary_gold,
            },
            "models": [
                {
                    "model": e.model,
                    "spearman_rho": e.rho,
                    "threshold": e.threshold,
                    "informedness": e.informedness,
                    "f1": e.f1,
                    "accuracy": e.accuracy,
                    "n_scored": e.n_scored,
                    "n_excluded": e.n_excluded,
                    "notes": list(e.notes),
                }
                for e in self.evaluations
            ],
            "pairs": [
                {
                    "id": r.record_id,
                    "lhs": " ".join(r.lhs_tokens),
                    "rhs": " ".join(r.rhs_tokens),
                    "human_score": r.human_score,
                    "human_norm": r.human_norm,
                    "gold": r.human_score > GOLD_MIDPOINT,
                    "scores": {
                        m: self.predictions[m][r.record_id].score
                        for m in sorted(self.predictions)
                        if r.record_id in self.predictions[m]
                    },
                }
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [
            "phrase entailment evaluation",
            f"note: {self.convention}",
            f"seed: {self.seed}",
            f"records: {len(self.records)} "
            f"(gold positive: {sum(binarize_gold(self.records))}, "
            f"at midpoint: {self.n_boundary_gold})",
            "",
            f"{'model':<18} {'rho':>7} {'theta':>7} {'inf':>7} "
            f"{'f1':>7} {'acc':>7} {'pairs':>6}",
        ]
        for e in self.evaluations:
            lines.append(
                f"{e.model:<18} {e.rho:>7.4f} {e.threshold:>7.4f} "
                f"{e.informedness:>7.4f} {e.f1:>7.4f} {e.accuracy:>7.4f} "
                f"{e.n_scored:>6d}"
            )
            for note in e.notes:
                lines.append(f"  note ({e.model}): {note}")
        return "\n".join(lines)

    def pair_table(self) -> str:
        """Per-pair predictions with threshold verdicts, tab separated."""
        models = [e.model for e in self.evaluations]
        header = ["id", "lhs", "rhs", "human", "gold"]
        for m in models:
            header += [m, f"{m}_verdict"]
        rows = ["\t".join(header)]
        for r in self.records:
            cells = [
                r.record_id,
                " ".join(r.lhs_tokens),
                " ".join(r.rhs_tokens),
                f"{r.human_score:.2f} ({r.human_norm:.3f})",
                "T" if r.human_score > GOLD_MIDPOINT else "F",
            ]
            for m in models:
                pred = self.predictions[m].get(r.record_id)
                if pred is None:
                    cells += ["-", "-"]
                else:
                    verdict = "T" if pred.score > self.thresholds[m] else "F"
                    cells += [f"{pred.score:.6f}", verdict]
            rows.append("\t".join(cells))
        return "\n".join(rows)

    def write(self, out_path: str) -> None:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text() + "\n")
        with open(out_path + ".json", "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")
        with open(out_path + ".pairs.tsv", "w", encoding="utf-8") as fh:
            fh.write(self.pair_table() + "\n")


def _build_store(config: ExperimentConfig) -> ModelStore:
    store = ModelStore()
    if config.vectors:
        store.vectors = load_vectors(config.vectors)
    if config.verb_matrices:
        loaded = load_matrices(config.verb_matrices)
        store.verb_matrices = {
            w: RelationalVerbMatrix(matrix=m, label=w) for w, m in loaded.items()
        }
    elif config.dependencies:
        deps = load_dependencies(config.dependencies)
        store.verb_matrices = build_verb_matrices(deps, store.vectors)
    if config.densities:
        store.densities = load_densities(config.densities)
    return store


def run_experiment(
    config: ExperimentConfig,
    store: ModelStore | None = None,
    records: Sequence[PhraseEntailmentRecord] | None = None,
) -> EvaluationReport:
    """Score a dataset under the configured models and assemble the report.

    ``store`` and ``records`` can be passed directly (the config paths are
    then ignored), which is how the synthetic pipeline and the tests call
    this.  A model with more than half its pairs unscorable fails the run;
    smaller gaps become per-model notes.
    """
    if store is None:
        store = _build_store(config)
    if records is None:
        records = load_dataset(config.dataset)
    records = list(records)
    fixed = config.fixed_threshold()
    evaluations: list[ModelEvaluation] = []
    predictions: dict[str, dict[str, ModelPrediction]] = {}
    thresholds: dict[str, float] = {}
    for model in config.models:
        preds: dict[str, ModelPrediction] = {}
        excluded: list[str] = []
        for rec in records:
            try:
                preds[rec.record_id] = score_pair(rec, model, store)
            except MissingWordError as exc:
                excluded.append(f"{rec.record_id}: {exc}")
        if len(preds) < len(records) / 2.0 or len(preds) < 3:
            raise ExperimentError(
                f"model {model}: only {len(preds)} of {len(records)} pairs "
                f"scorable"
            )
        scored = [r for r in records if r.record_id in preds]
        scores = [preds[r.record_id].score for r in scored]
        human = [r.human_score for r in scored]
        rho = spearman(scores, human)
        gold = binarize_gold(scored)
        if fixed is None:
            theta, _ = optimize_threshold(scores, gold)
        else:
            theta = fixed
        metrics = classification_metrics(scores, gold, theta)
        notes = [f"excluded {e}" for e in excluded]
        if metrics.note:
            notes.append(metrics.note)
        n_degenerate = sum(1 for p in preds.values() if p.degenerate)
        if n_degenerate:
            notes.append(f"{n_degenerate} degenerate phrase(s) scored 0")
        evaluations.append(
            ModelEvaluation(
                model=model,
                rho=rho,
                threshold=theta,
                informedness=metrics.informedness,
                f1=metrics.f1,
                accuracy=metrics.accuracy,
                n_scored=len(scored),
                n_excluded=len(excluded),
                notes=tuple(notes),
            )
        )
        predictions[model] = preds
        thresholds[model] = theta
    n_boundary = sum(1 for r in records if r.human_score == GOLD_MIDPOINT)
    config_echo = {
        "models": list(config.models),
        "thresholds_mode": config.thresholds_mode,
        "dataset": config.dataset,
        "vectors": config.vectors,
        "verb_matrices": config.verb_matrices,
        "dependencies": config.dependencies,
        "densities": config.densities,
    }
    return EvaluationReport(
        evaluations=evaluations,
        records=records,
        predictions=predictions,
        thresholds=thresholds,
        config_echo=config_echo,
        seed=config.seed,
        n_boundary_gold=n_boundary,
    )


def load_snapshot_fixture(path) -> tuple[list[PhraseEntailmentRecord], dict[str, list[float]], dict[str, float]]:
    """Load a published-predictions snapshot used to validate reporting.

    The file is the dataset TSV layout extended with one score column per
    model after the human score, plus ``# threshold <model> <value>``
    comment lines.  Returns (records, per-model scores, thresholds).
    """
    thresholds: dict[str, float] = {}
    model_names: list[str] = []
    records: list[PhraseEntailmentRecord] = []
    scores: dict[str, list[float]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.rstrip("\n")
            if not text.strip():
                continue
            if text.lstrip().startswith("#"):
                parts = text.lstrip("# ").split()
                if parts and parts[0] == "threshold" and len(parts) == 3:
                    thresholds[parts[1]] = float(parts[2])
                elif parts and parts[0] == "models":
                    model_names = parts[1:]
                    scores = {m: [] for m in model_names}
                continue
            parts = text.split("\t")
            if len(parts) != 6 + len(model_names):
                raise DatasetFormatError(
                    f"expected {6 + len(model_names)} fields, got {len(parts)}",
                    path=path,
                    line_no=line_no,
                )
            records.append(
                PhraseEntailmentRecord(
                    record_id=parts[0],
                    lhs_tokens=tuple(parts[1].split()),
                    lhs_order=parts[2],
                    rhs_tokens=tuple(parts[3].split()),
                    rhs_order=parts[4],
                    human_score=float(parts[5]),
                )
            )
            for m, raw in zip(model_names, parts[6:]):
                scores[m].append(float(raw))
    if not records or not model_names:
        raise DatasetFormatError("empty snapshot fixture", path=path, line_no=1)
    return records, scores, thresholds
