"""Composing word meanings into phrase meanings by tensor contraction.

A planar reduction of a type string doubles as a contraction recipe: each
cancelled pair of factors contracts the matching tensor indices, each
surviving factor stays as an output index.  Vector meanings contract
directly.  Operator (density-matrix) meanings carry doubled indices, one
primal and one dual copy per factor, and every reduction link contracts
both copies; a link from an index to its own dual is a partial trace.

For the two-word phrases used in evaluation the generic engine collapses
to closed forms: the phrase vector is v * sum_i <n|n_i> n_i over the
verb's attested arguments n_i (the same expression for verb-object and
subject-verb order), and the phrase operator is the trace-normalised
congruence verb @ noun @ verb.  Both identities are part of the test
suite; the engine and the closed forms check each other.
"""
from __future__ import annotations

import json
import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegeneratePhraseError
from .measures import representativeness_vn, support_inclusion
from .pregroup import PregroupType, Reduction, basic, flatten, reduce
from .tensor_core import (
    DensityMatrix,
    _as_matrix,
    _as_vector,
    normalize_trace,
)

__all__ = [
    "WordTensor",
    "ContractionPlan",
    "vector_plan",
    "density_plan",
    "execute_plan",
    "contract_vectors",
    "contract_density_raw",
    "contract_densities",
    "cpm_pure",
    "cpm_mixed",
    "verb_tensor",
    "compose_phrase_vector",
    "compose_phrase_density",
    "compose_additive",
    "compose_multiplicative",
    "PropositionReport",
    "verify_proposition",
]


@dataclass(frozen=True)
class WordTensor:
    """A tensor carrying a pregroup type.

    Plain tensors have one index per flattened factor of the type; doubled
    tensors (operator meanings) have two, all primal indices first, then
    the dual ones in the same order.
    """

    data: np.ndarray
    type: PregroupType
    doubled: bool = False
    label: str = ""

    def __post_init__(self):
        a = np.asarray(self.data, dtype=float)
        if not np.all(np.isfinite(a)):
            raise ValueError("tensor has non-finite entries")
        k = len(self.type.factors)
        if k == 0:
            raise ValueError("word tensor needs a non-empty type")
        want = 2 * k if self.doubled else k
        if a.ndim != want:
            raise ValueError(
                f"type {self.type} needs a tensor of order {want}, "
                f"got order {a.ndim}"
            )
        object.__setattr__(self, "data", a)

    @property
    def arity(self) -> int:
        return len(self.type.factors)


@dataclass(frozen=True)
class ContractionPlan:
    """Pairs of tensor indices to contract, plus the output index order.

    Indices are 0-based positions into the concatenated index list of a
    tensor sequence.  Every index appears in exactly one link or in
    ``output_indices``.
    """

    links: tuple[tuple[int, int], ...]
    output_indices: tuple[int, ...]
    n_indices: int

    def __post_init__(self):
        seen: set[int] = set()
        for i, j in self.links:
            if i == j or not (0 <= i < self.n_indices and 0 <= j < self.n_indices):
                raise ValueError(f"bad link ({i}, {j})")
            if i in seen or j in seen:
                raise ValueError("links are not pairwise disjoint")
            seen.update((i, j))
        if seen & set(self.output_indices):
            raise ValueError("an index is both linked and an output")
        if seen | set(self.output_indices) != set(range(self.n_indices)):
            raise ValueError("links and outputs do not cover all indices")


def vector_plan(reduction: Reduction) -> ContractionPlan:
    """Read a reduction as a plan over plain (one index per factor) tensors."""
    return ContractionPlan(
        links=reduction.links,
        output_indices=reduction.surviving,
        n_indices=reduction.n_factors,
    )


def density_plan(
    reduction: Reduction, types: Sequence[PregroupType]
) -> ContractionPlan:
    """Read a reduction as a plan over doubled tensors.

    Each link contracts both the primal and the dual copies of its pair;
    the outputs list the surviving primal indices, then the surviving
    duals, so the result reshapes directly into an operator.
    """
    arities = [len(t.factors) for t in types]
    if sum(arities) != reduction.n_factors:
        raise ValueError("reduction does not match the given types")
    primal: list[int] = []
    dual: list[int] = []
    offset = 0
    for k in arities:
        primal.extend(offset + l for l in range(k))
        dual.extend(offset + k + l for l in range(k))
        offset += 2 * k
    links = []
    for i, j in reduction.links:
        links.append((primal[i], primal[j]))
        links.append((dual[i], dual[j]))
    outputs = [primal[p] for p in reduction.surviving]
    outputs += [dual[p] for p in reduction.surviving]
    return ContractionPlan(
        links=tuple(links),
        output_indices=tuple(outputs),
        n_indices=2 * reduction.n_factors,
    )


def execute_plan(arrays: Sequence[np.ndarray], plan: ContractionPlan) -> np.ndarray:
    """Contract a tensor sequence along a plan, pairwise, via einsum."""
    arrays = [np.asarray(a, dtype=float) for a in arrays]
    total = sum(a.ndim for a in arrays)
    if total != plan.n_indices:
        raise ValueError(
            f"plan covers {plan.n_indices} indices, tensors have {total}"
        )
    dims: list[int] = []
    for a in arrays:
        dims.extend(a.shape)
    letters = list(string.ascii_letters[: plan.n_indices])
    for i, j in plan.links:
        if dims[i] != dims[j]:
            raise ValueError(
                f"link ({i}, {j}) contracts unequal dimensions "
                f"{dims[i]} and {dims[j]}"
            )
        letters[j] = letters[i]
    specs = []
    start = 0
    for a in arrays:
        specs.append("".join(letters[start : start + a.ndim]))
        start += a.ndim
    out = "".join(letters[o] for o in plan.output_indices)
    return np.einsum(",".join(specs) + "->" + out, *arrays, optimize=True)


def contract_vectors(
    tensors: Sequence[WordTensor], plan: ContractionPlan
) -> WordTensor:
    """Contract plain word tensors; the result keeps the surviving type."""
    if any(t.doubled for t in tensors):
        raise ValueError("contract_vectors takes plain tensors only")
    factors = flatten(t.type for t in tensors)
    result = execute_plan([t.data for t in tensors], plan)
    out_type = PregroupType(tuple(factors[o] for o in plan.output_indices))
    return WordTensor(result, out_type)


def contract_density_raw(
    tensors: Sequence[WordTensor], plan: ContractionPlan
) -> np.ndarray:
    """Contract doubled tensors and fold the result into operator form.

    The plan's outputs must list surviving primal indices first, then the
    matching duals (as ``density_plan`` arranges); the result is the
    un-normalised phrase operator.
    """
    if not all(t.doubled for t in tensors):
        raise ValueError("contract_density_raw takes doubled tensors only")
    res = execute_plan([t.data for t in tensors], plan)
    if res.ndim % 2 != 0:
        raise ValueError("operator result needs an even number of indices")
    m = res.ndim // 2
    rows = int(np.prod(res.shape[:m], dtype=np.int64)) if m else 1
    cols = int(np.prod(res.shape[m:], dtype=np.int64)) if m else 1
    return res.reshape(rows, cols)


def contract_densities(
    tensors: Sequence[WordTensor], plan: ContractionPlan, label: str = ""
) -> DensityMatrix:
    """Contract doubled tensors into a trace-normalised phrase operator."""
    raw = contract_density_raw(tensors, plan)
    sym = (raw + raw.T) / 2.0
    tr = float(np.trace(sym))
    if tr <= 1e-14:
        raise DegeneratePhraseError(
            "phrase operator has (near) zero trace; no support overlap"
        )
    return normalize_trace(sym, label=label)


def cpm_pure(tensor: WordTensor) -> WordTensor:
    """Double a plain tensor into the operator it induces: X tensor X."""
    if tensor.doubled:
        raise ValueError("tensor is already doubled")
    data = np.tensordot(tensor.data, tensor.data, axes=0)
    return WordTensor(data, tensor.type, doubled=True, label=tensor.label)


def cpm_mixed(operator, type: PregroupType, label: str = "") -> WordTensor:
    """Wrap a positive operator on the type's tensor space as a doubled tensor.

    ``operator`` is a (d^k, d^k) matrix for a k-factor type; it is reshaped
    so the k row indices become the primal copies and the k column indices
    the duals.
    """
    m = _as_matrix(getattr(operator, "matrix", operator))
    k = len(type.factors)
    if k == 0:
        raise ValueError("word tensor needs a non-empty type")
    d = round(m.shape[0] ** (1.0 / k))
    if d**k != m.shape[0]:
        raise ValueError(
            f"operator of size {m.shape[0]} is not a {k}-fold tensor power"
        )
    data = m.reshape([d] * (2 * k))
    return WordTensor(data, type, doubled=True, label=label)


_ORDERS = ("verb-object", "subject-verb")


def verb_tensor(matrix, order: str, label: str = "") -> WordTensor:
    """A relational verb matrix as a word tensor for the given phrase order.

    The matrix convention is output axis first, argument axis second, so a
    verb-object phrase carries type s . n^l with the matrix as stored and a
    subject-verb phrase carries type n^r . s with its transpose.
    """
    m = _as_matrix(getattr(matrix, "matrix", matrix))
    n, s = basic("n"), basic("s")
    if order == "verb-object":
        return WordTensor(m, s * n.l, label=label)
    if order == "subject-verb":
        return WordTensor(m.T, n.r * s, label=label)
    raise ValueError(f"order must be one of {_ORDERS}, got {order!r}")


def compose_phrase_vector(verb, noun) -> np.ndarray:
    """The phrase vector for a verb and its noun, unnormalised.

    ``verb`` is either a relational verb carrier with ``verb_vector`` and
    ``argument_vectors`` (closed form) or an assembled matrix with the
    argument axis last (contraction form); both orders of a two-word
    phrase give the same expression.  An all-zero result raises
    DegeneratePhraseError so callers can score it as non-entailing.
    """
    n = _as_vector(noun)
    args = getattr(verb, "argument_vectors", None)
    if args is not None:
        v = _as_vector(verb.verb_vector)
        counts = getattr(verb, "argument_counts", None) or [1.0] * len(args)
        if len(counts) != len(args):
            raise ValueError("argument counts do not match argument vectors")
        acc = np.zeros_like(v)
        for c, ni in zip(counts, args):
            ai = _as_vector(ni)
            if ai.shape != n.shape or ai.shape != v.shape:
                raise ValueError("argument vector dimension mismatch")
            acc += c * float(n @ ai) * ai
        phrase = v * acc
    else:
        m = _as_matrix(verb)
        if m.shape[1] != n.shape[0]:
            raise ValueError(f"dimension mismatch: {m.shape} @ {n.shape}")
        phrase = m @ n
    if float(np.abs(phrase).sum()) <= 1e-14:
        raise DegeneratePhraseError("phrase vector is zero; no overlap")
    return phrase


def compose_phrase_density(verb, noun, label: str = "") -> DensityMatrix:
    """The phrase operator verb @ noun @ verb, trace-normalised.

    The same congruence serves verb-object and subject-verb phrases since
    word operators are symmetric.
    """
    v = _as_matrix(getattr(verb, "matrix", verb))
    n = _as_matrix(getattr(noun, "matrix", noun))
    if v.shape != n.shape:
        raise ValueError(f"dimension mismatch: {v.shape} vs {n.shape}")
    m = v @ n @ v
    m = (m + m.T) / 2.0
    if float(np.trace(m)) <= 1e-14:
        raise DegeneratePhraseError(
            "phrase operator has (near) zero trace; no support overlap"
        )
    return normalize_trace(m, label=label)


def compose_additive(verb, noun) -> np.ndarray:
    """Baseline: entrywise sum, L1-normalised."""
    v, n = _as_vector(verb), _as_vector(noun)
    if v.shape != n.shape:
        raise ValueError(f"dimension mismatch: {v.shape[0]} vs {n.shape[0]}")
    s = v + n
    if float(np.abs(s).sum()) <= 1e-14:
        raise DegeneratePhraseError("additive phrase is zero")
    return s / s.sum()


def compose_multiplicative(verb, noun) -> np.ndarray:
    """Baseline: entrywise product, L1-normalised; disjoint supports are
    degenerate."""
    v, n = _as_vector(verb), _as_vector(noun)
    if v.shape != n.shape:
        raise ValueError(f"dimension mismatch: {v.shape[0]} vs {n.shape[0]}")
    p = v * n
    if float(np.abs(p).sum()) <= 1e-14:
        raise DegeneratePhraseError("multiplicative phrase is zero")
    return p / p.sum()


def _phrase_types(phrase_len: int) -> list[PregroupType]:
    n, s = basic("n"), basic("s")
    if phrase_len == 2:
        return [n, n.r * s]
    if phrase_len == 3:
        return [n, n.r * s * n.l, n]
    raise ValueError(f"phrase_len must be 2 or 3, got {phrase_len}")


def _sample_state(rng: np.random.Generator, d: int, rank: int) -> np.ndarray:
    g = rng.standard_normal((d, rank))
    a = g @ g.T
    return a / np.trace(a)


@dataclass(frozen=True)
class PropositionReport:
    """Outcome of the randomised monotone-composition check."""

    trials: int
    dim: int
    phrase_len: int
    seed: int
    negative_control: bool
    failures: int
    counterexample: dict | None

    @property
    def passes(self) -> int:
        return self.trials - self.failures

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "dim": self.dim,
            "phrase_len": self.phrase_len,
            "seed": self.seed,
            "negative_control": self.negative_control,
            "failures": self.failures,
            "passes": self.passes,
            "counterexample": self.counterexample,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        mode = (
            "negative control (word supports broken on purpose)"
            if self.negative_control
            else "planted word-level inclusion"
        )
        lines = [
            f"monotone composition check: dim={self.dim} "
            f"phrase_len={self.phrase_len} trials={self.trials} "
            f"seed={self.seed}",
            f"mode: {mode}",
            f"result: {self.passes}/{self.trials} trials kept support "
            f"inclusion and a positive graded score",
        ]
        if self.counterexample is not None:
            lines.append(
                f"first failing trial: {self.counterexample['trial']}"
            )
        return "\n".join(lines)


def verify_proposition(
    trials: int,
    dim: int,
    phrase_len: int,
    seed: int = 0,
    negative_control: bool = False,
) -> PropositionReport:
    """Randomised check that composition preserves graded entailment.

    Each trial samples, per word, a state v and a second state w = r v + p
    with r in (0, 1] and p positive, so w entails-receives v by
    construction.  Both word strings are composed by the operator engine
    and the phrase pair must keep support inclusion and a positive graded
    score.  With ``negative_control`` the w states instead get supports
    strictly inside those of the v states, and every trial must be caught
    as a violation; this keeps the checker falsifiable.

    Per-trial generators are derived from (seed, trial) so results do not
    depend on scheduling.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if dim < 2:
        raise ValueError("dim must be >= 2")
    types = _phrase_types(phrase_len)
    reduction = reduce(types, basic("s"))
    plan = density_plan(reduction, types)
    failures = 0
    counterexample = None
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        words_v, words_w = [], []
        ops_v, ops_w = [], []
        for wt in types:
            dk = dim ** len(wt.factors)
            if negative_control:
                g = rng.standard_normal((dk, dk))
                a = np.eye(dk) + 0.2 * (g @ g.T) / dk
                a /= np.trace(a)
                u = rng.standard_normal(dk)
                w = np.outer(u, u) / float(u @ u)
            else:
                a = _sample_state(rng, dk, int(rng.integers(1, dk + 1)))
                r = float(rng.uniform(0.2, 1.0))
                w = r * a
                if rng.uniform() >= 0.15:  # usually add a positive remainder
                    w = w + float(rng.uniform(0.1, 1.0)) * _sample_state(
                        rng, dk, int(rng.integers(1, dk + 1))
                    )
            ops_v.append(a)
            ops_w.append(w)
            words_v.append(cpm_mixed(a, wt))
            words_w.append(cpm_mixed(w, wt))
        phrase_v = contract_densities(words_v, plan)
        phrase_w = contract_densities(words_w, plan)
        included = support_inclusion(phrase_v, phrase_w)
        rep = representativeness_vn(phrase_v, phrase_w)
        if not (included and rep.value > 0.0):
            failures += 1
            if counterexample is None:
                counterexample = {
                    "trial": t,
                    "seed": seed,
                    "support_inclusion": included,
                    "graded_score": rep.value,
                    "words_v": [op.tolist() for op in ops_v],
                    "words_w": [op.tolist() for op in ops_w],
                }
    return PropositionReport(
        trials=trials,
        dim=dim,
        phrase_len=phrase_len,
        seed=seed,
        negative_control=negative_control,
        failures=failures,
        counterexample=counterexample,
    )
