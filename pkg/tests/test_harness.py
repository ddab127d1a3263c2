"""Evaluation harness: rank correlation, thresholds, experiment runs."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entailkit.errors import (
    DatasetFormatError,
    ExperimentError,
    MissingWordError,
)
from entailkit.harness import (
    MODEL_NAMES,
    ExperimentConfig,
    ModelPrediction,
    ModelStore,
    PhraseEntailmentRecord,
    binarize_gold,
    classification_metrics,
    load_config,
    load_dataset,
    load_snapshot_fixture,
    optimize_threshold,
    run_experiment,
    score_pair,
    spearman,
)
from entailkit.model_build import build_relational_verb
from entailkit.tensor_core import DensityMatrix

SNAPSHOT = "src/entailkit/data/phrase_snapshot.tsv"


# ---------------------------------------------------------------------------
# rank correlation


def _rank_formula(xs, ys):
    # tie-free closed form: 1 - 6 sum(d^2) / (n (n^2 - 1))
    rx = np.argsort(np.argsort(xs)) + 1
    ry = np.argsort(np.argsort(ys)) + 1
    d = rx - ry
    n = len(xs)
    return 1.0 - 6.0 * float(d @ d) / (n * (n * n - 1))


def test_spearman_frozen_case():
    got = spearman([1.0, 2.0, 3.0, 4.0], [1.0, 3.0, 2.0, 4.0])
    # one swapped adjacent pair: 1 - 6*2 / (4*15) = 0.8
    assert got == pytest.approx(0.8, abs=1e-12)


def test_spearman_extremes():
    xs = [3.0, 1.0, 4.0, 1.5, 9.0]
    assert spearman(xs, xs) == pytest.approx(1.0, abs=1e-12)
    assert spearman(xs, [-x for x in xs]) == pytest.approx(-1.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    xs=st.lists(
        st.integers(min_value=0, max_value=10_000),
        min_size=3,
        max_size=30,
        unique=True,
    ),
    shuffle_seed=st.integers(min_value=0, max_value=2**31),
)
def test_spearman_matches_rank_formula_without_ties(xs, shuffle_seed):
    rng = np.random.default_rng(shuffle_seed)
    ys = rng.permutation(len(xs)).astype(float)
    if len(set(ys)) < 2:
        return
    a = np.array(xs, dtype=float)
    assert spearman(a, ys) == pytest.approx(_rank_formula(a, ys), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    xs=st.lists(
        st.floats(min_value=-100, max_value=100, allow_nan=False),
        min_size=3,
        max_size=20,
        unique=True,
    )
)
def test_spearman_invariant_under_monotone_maps(xs):
    ys = list(range(len(xs)))
    base = spearman(xs, ys)
    squashed = [math.atan(x / 10.0) for x in xs]
    assert spearman(squashed, ys) == pytest.approx(base, abs=1e-12)


def test_spearman_average_ranks_for_ties():
    # xs ranks (1.5, 1.5, 3); correlation with (1, 2, 3) is sqrt(3)/2
    got = spearman([1.0, 1.0, 2.0], [1.0, 2.0, 3.0])
    assert got == pytest.approx(math.sqrt(3.0) / 2.0, abs=1e-12)


def test_spearman_validation():
    with pytest.raises(ValueError):
        spearman([1.0, 2.0], [2.0, 1.0])
    with pytest.raises(ValueError):
        spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        spearman([1.0, 2.0, 3.0], [1.0, 2.0])


# ---------------------------------------------------------------------------
# thresholds and metrics


def _oracle_best_informedness(scores, gold):
    # any real threshold realises the same partition as some observed
    # score (or everything-positive), so scanning those is exhaustive
    best = -math.inf
    for theta in [min(scores) - 1.0] + sorted(set(scores)):
        tp = sum(1 for s, g in zip(scores, gold) if s > theta and g)
        fp = sum(1 for s, g in zip(scores, gold) if s > theta and not g)
        fn = sum(1 for s, g in zip(scores, gold) if s <= theta and g)
        tn = sum(1 for s, g in zip(scores, gold) if s <= theta and not g)
        best = max(best, tp / (tp + fn) + tn / (tn + fp) - 1.0)
    return best


@settings(max_examples=150, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=10_000),
    n=st.integers(min_value=2, max_value=40),
)
def test_optimize_threshold_is_exhaustive(seed, n):
    rng = np.random.default_rng(seed)
    scores = np.round(rng.random(n), 2).tolist()
    gold = (rng.random(n) < 0.5).tolist()
    if all(gold) or not any(gold):
        return
    theta, j = optimize_threshold(scores, gold)
    assert j == pytest.approx(_oracle_best_informedness(scores, gold), abs=1e-12)
    metrics = classification_metrics(scores, gold, theta)
    assert metrics.informedness == pytest.approx(j, abs=1e-12)


def test_optimize_threshold_tie_goes_to_smallest():
    scores = [0.1, 0.2, 0.8, 0.9]
    gold = [False, True, False, True]
    theta, j = optimize_threshold(scores, gold)
    # 0.15 and 0.85 both reach informedness 0.5; the smaller wins
    assert theta == pytest.approx(0.15)
    assert j == pytest.approx(0.5)


def test_optimize_threshold_validation():
    with pytest.raises(ValueError):
        optimize_threshold([], [])
    with pytest.raises(ValueError):
        optimize_threshold([0.1, 0.9], [True, True])
    with pytest.raises(ValueError):
        optimize_threshold([0.1, 0.9], [False])


def test_classification_metrics_frozen_confusion():
    scores = [0.9, 0.8, 0.6, 0.4, 0.2, 0.1]
    gold = [True, True, False, True, False, False]
    m = classification_metrics(scores, gold, threshold=0.5)
    # TP=2 FP=1 TN=2 FN=1
    assert m.informedness == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert m.f1 == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert m.accuracy == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert m.note == ""


def test_classification_metrics_no_positive_predictions():
    m = classification_metrics([0.1, 0.2, 0.3], [True, False, True], threshold=0.9)
    assert m.f1 == 0.0
    assert "no predicted positives" in m.note
    assert m.informedness == pytest.approx(0.0)


def test_binarize_gold_strict_midpoint():
    records = [_record("r%d" % i, score) for i, score in enumerate((5.5, 4.0, 1.8))]
    assert binarize_gold(records) == [True, False, False]


# ---------------------------------------------------------------------------
# records and datasets


def _record(rid, score, lhs=("v1", "x"), rhs=("v2", "y"),
            lhs_order="verb-object", rhs_order="verb-object"):
    return PhraseEntailmentRecord(
        record_id=rid,
        lhs_tokens=lhs,
        lhs_order=lhs_order,
        rhs_tokens=rhs,
        rhs_order=rhs_order,
        human_score=score,
    )


def test_record_validation():
    with pytest.raises(ValueError):
        _record("r", 5.0, lhs=("only-one",))
    with pytest.raises(ValueError):
        _record("r", 5.0, lhs_order="verb-first")
    with pytest.raises(ValueError):
        _record("r", 9.0)
    with pytest.raises(ValueError):
        _record("r", 0.5)


def test_record_norm_and_roles():
    rec = _record("r", 5.5, lhs=("arrange", "task"), rhs=("work", "organize"),
                  rhs_order="subject-verb")
    assert rec.human_norm == pytest.approx(0.75)
    assert rec.verb_and_noun("lhs") == ("arrange", "task")
    assert rec.verb_and_noun("rhs") == ("organize", "work")


def test_load_dataset(tmp_path):
    p = tmp_path / "data.tsv"
    p.write_text(
        "# a comment line\n"
        "r1\tarrange task\tverb-object\torganize work\tverb-object\t5.50\n"
        "r2\teditor threathen\tsubject-verb\tapplication predict\tsubject-verb\t1.13\n"
    )
    records = load_dataset(p)
    assert [r.record_id for r in records] == ["r1", "r2"]
    assert records[1].verb_and_noun("lhs") == ("threathen", "editor")


@pytest.mark.parametrize(
    "line",
    [
        "r1\tarrange task\tverb-object\torganize work\tverb-object",
        "r1\tarrange task\tverb-object\torganize work\tverb-object\thigh",
        "r1\tarrange task much\tverb-object\torganize work\tverb-object\t5.0",
        "r1\tarrange task\tsideways\torganize work\tverb-object\t5.0",
    ],
)
def test_load_dataset_malformed(tmp_path, line):
    p = tmp_path / "data.tsv"
    p.write_text(line + "\n")
    with pytest.raises(DatasetFormatError):
        load_dataset(p)


def test_load_dataset_empty(tmp_path):
    p = tmp_path / "data.tsv"
    p.write_text("# nothing here\n")
    with pytest.raises(DatasetFormatError):
        load_dataset(p)


def test_model_prediction_validation():
    with pytest.raises(ValueError):
        ModelPrediction("r", "baseline_verb", 1.5)
    with pytest.raises(ValueError):
        ModelPrediction("r", "baseline_verb", 0.3, degenerate=True)


# ---------------------------------------------------------------------------
# a small deterministic store for the scorers


def _toy_store():
    vectors = {
        "v1": np.array([1.0, 1.0, 0.0]),
        "v2": np.array([1.0, 2.0, 0.0]),
        "v3": np.array([0.0, 1.0, 1.0]),
        "x": np.array([1.0, 0.0, 0.0]),
        "y": np.array([1.0, 1.0, 0.0]),
        "z": np.array([0.0, 0.0, 1.0]),
    }
    verb_matrices = {
        "v1": build_relational_verb(vectors["v1"], [vectors["x"], vectors["y"]],
                                    [1.0, 1.0], label="v1"),
        "v2": build_relational_verb(vectors["v2"], [vectors["y"]], [1.0], label="v2"),
        "v3": build_relational_verb(vectors["v3"], [vectors["z"]], [1.0], label="v3"),
    }
    densities = {
        "v1": DensityMatrix(np.diag([0.5, 0.5, 0.0])),
        "v2": DensityMatrix(np.eye(3) / 3.0),
        "v3": DensityMatrix(np.diag([0.0, 0.5, 0.5])),
        "x": DensityMatrix(np.diag([1.0, 0.0, 0.0])),
        "y": DensityMatrix(np.diag([0.5, 0.5, 0.0])),
        "z": DensityMatrix(np.diag([0.0, 0.0, 1.0])),
    }
    return ModelStore(vectors=vectors, verb_matrices=verb_matrices,
                      densities=densities)


def _toy_records():
    return [
        _record("r1", 7.0, lhs=("v1", "x"), rhs=("v1", "x")),
        _record("r2", 5.0, lhs=("v1", "x"), rhs=("v2", "y")),
        _record("r3", 3.0, lhs=("v2", "y"), rhs=("v1", "x")),
        _record("r4", 1.5, lhs=("v3", "z"), rhs=("v1", "x")),
        _record("r5", 5.0, lhs=("x", "v1"), rhs=("y", "v2"),
                lhs_order="subject-verb", rhs_order="subject-verb"),
        _record("r6", 2.0, lhs=("v1", "y"), rhs=("v3", "z")),
    ]


def test_score_pair_identical_phrase_scores_one():
    store = _toy_store()
    rec = _record("same", 7.0, lhs=("v1", "x"), rhs=("v1", "x"))
    for model in MODEL_NAMES:
        pred = score_pair(rec, model, store)
        assert pred.score == pytest.approx(1.0, abs=1e-12), model
        assert not pred.degenerate


def test_score_pair_disjoint_supports():
    store = _toy_store()
    rec = _record("apart", 1.5, lhs=("v3", "z"), rhs=("v1", "x"))
    for model in ("baseline_verb", "categorical_kl", "categorical_vn",
                  "multiplicative_kl"):
        pred = score_pair(rec, model, store)
        assert pred.score == 0.0, model


def test_score_pair_subject_verb_matches_verb_object():
    store = _toy_store()
    vo = _record("vo", 5.0, lhs=("v1", "x"), rhs=("v2", "y"))
    sv = _record("sv", 5.0, lhs=("x", "v1"), rhs=("y", "v2"),
                 lhs_order="subject-verb", rhs_order="subject-verb")
    for model in MODEL_NAMES:
        assert score_pair(vo, model, store).score == pytest.approx(
            score_pair(sv, model, store).score, abs=1e-12
        ), model


def test_score_pair_missing_word_and_unknown_model():
    store = _toy_store()
    rec = _record("gone", 5.0, lhs=("ghost", "x"), rhs=("v2", "y"))
    for model in MODEL_NAMES:
        with pytest.raises(MissingWordError):
            score_pair(rec, model, store)
    # the verb baseline never touches the nouns, the others need them
    noun_gone = _record("gone2", 5.0, lhs=("v1", "nope"), rhs=("v2", "y"))
    assert score_pair(noun_gone, "baseline_verb", store).score > 0
    for model in MODEL_NAMES[1:]:
        with pytest.raises(MissingWordError):
            score_pair(noun_gone, model, store)
    with pytest.raises(ValueError):
        score_pair(_toy_records()[0], "fancy_model", store)


# ---------------------------------------------------------------------------
# experiment runs


def test_run_experiment_end_to_end(tmp_path):
    config = ExperimentConfig(out=str(tmp_path / "report"))
    report = run_experiment(config, store=_toy_store(), records=_toy_records())
    assert [e.model for e in report.evaluations] == list(MODEL_NAMES)
    for ev in report.evaluations:
        assert -1.0 <= ev.rho <= 1.0
        assert ev.n_scored == 6
        assert ev.n_excluded == 0
    # scores correlate with the constructed gold ordering
    assert all(ev.rho > 0 for ev in report.evaluations)


def test_run_experiment_is_deterministic():
    config = ExperimentConfig()
    a = run_experiment(config, store=_toy_store(), records=_toy_records())
    b = run_experiment(config, store=_toy_store(), records=_toy_records())
    assert a.to_json() == b.to_json()
    assert a.to_text() == b.to_text()
    assert a.pair_table() == b.pair_table()


def test_report_write_produces_three_files(tmp_path):
    out = tmp_path / "report"
    config = ExperimentConfig(out=str(out))
    report = run_experiment(config, store=_toy_store(), records=_toy_records())
    report.write(str(out))
    text = out.read_text()
    assert "baseline_verb" in text
    data = json.loads((tmp_path / "report.json").read_text())
    assert {e["model"] for e in data["models"]} == set(MODEL_NAMES)
    assert data["dataset"]["n_records"] == 6
    pairs = (tmp_path / "report.pairs.tsv").read_text().strip().splitlines()
    assert len(pairs) == 1 + 6  # header plus one row per record


def test_run_experiment_fixed_threshold():
    config = ExperimentConfig(thresholds_mode="fixed:0.2")
    report = run_experiment(config, store=_toy_store(), records=_toy_records())
    assert all(th == 0.2 for th in report.thresholds.values())


def test_run_experiment_majority_unscorable():
    records = _toy_records()
    records += [
        _record("m%d" % i, 2.0, lhs=("ghost%d" % i, "x"), rhs=("v1", "x"))
        for i in range(7)
    ]
    with pytest.raises(ExperimentError):
        run_experiment(ExperimentConfig(), store=_toy_store(), records=records)


def test_run_experiment_notes_partial_exclusions():
    records = _toy_records() + [
        _record("gone", 2.0, lhs=("ghost", "x"), rhs=("v1", "x"))
    ]
    report = run_experiment(ExperimentConfig(), store=_toy_store(), records=records)
    for ev in report.evaluations:
        assert ev.n_excluded == 1
        assert any("ghost" in note for note in ev.notes)


# ---------------------------------------------------------------------------
# config files


def test_load_config_round_trip(tmp_path):
    p = tmp_path / "exp.cfg"
    p.write_text(
        "# experiment\n"
        "dataset = data.tsv\n"
        "vectors=vec.txt\n"
        "verb-matrices = mat.txt\n"
        "densities = den.txt\n"
        "models = baseline_verb, categorical_kl\n"
        "thresholds-mode = fixed:0.25\n"
        "seed = 7\n"
        "alpha = 0.95\n"
    )
    cfg = load_config(p)
    assert cfg.dataset == "data.tsv"
    assert cfg.verb_matrices == "mat.txt"
    assert cfg.models == ("baseline_verb", "categorical_kl")
    assert cfg.fixed_threshold() == pytest.approx(0.25)
    assert cfg.seed == 7
    assert cfg.alpha == pytest.approx(0.95)


@pytest.mark.parametrize(
    "content",
    [
        "unknown_key = 3\n",
        "models = baseline_verb, wild_model\n",
        "seed = soon\n",
        "just a line without equals\n",
        "thresholds_mode = fixed:\n",
    ],
)
def test_load_config_rejects_bad_input(tmp_path, content):
    p = tmp_path / "exp.cfg"
    p.write_text(content)
    with pytest.raises((DatasetFormatError, ValueError)):
        load_config(p)


# ---------------------------------------------------------------------------
# stored snapshot fixture


def test_snapshot_fixture_loads():
    records, scores, thresholds = load_snapshot_fixture(SNAPSHOT)
    assert len(records) == 6
    assert sorted(scores) == sorted(thresholds)
    for model, values in scores.items():
        assert len(values) == len(records)
        assert all(0.0 <= v <= 1.0 for v in values)
    # the snapshot spans both phrase orders and both gold classes
    assert {r.lhs_order for r in records} == {"verb-object", "subject-verb"}
    gold = binarize_gold(records)
    assert any(gold) and not all(gold)
