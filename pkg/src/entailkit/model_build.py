"""Building distributional models from a corpus.

The pipeline is counts -> PMI weighting -> nonnegative factorisation for
the word vectors, attested-argument assembly for relational verb
matrices, and context-window mixtures for word density operators.  File
formats are plain text so intermediate artefacts stay inspectable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EntailkitError, ModelIOError
from .tensor_core import DensityMatrix, WordVector, normalize_trace

__all__ = [
    "CooccurrenceCounts",
    "read_corpus",
    "count_cooccurrences",
    "pmi_weight",
    "NmfModel",
    "nmf",
    "RelationalVerbMatrix",
    "build_relational_verb",
    "load_dependencies",
    "build_verb_matrices",
    "context_occurrences",
    "density_accumulate",
    "build_density_word",
    "store_vectors",
    "load_vectors",
    "store_matrices",
    "load_matrices",
    "store_densities",
    "load_densities",
    "store_counts",
    "load_counts",
]

# full precision so text round-trips reproduce the float exactly
_FMT = "%.17g"


def _tokens(sentence) -> list[str]:
    if isinstance(sentence, str):
        return sentence.split()
    return list(sentence)


def read_corpus(path) -> Iterable[list[str]]:
    """Yield token lists, one sentence per line, skipping empty lines."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            toks = line.split()
            if toks:
                yield toks


@dataclass
class CooccurrenceCounts:
    """A dense count matrix of targets (rows) against contexts (columns)."""

    vocab: tuple[str, ...]
    context_vocab: tuple[str, ...]
    counts: np.ndarray
    window: int

    def __post_init__(self):
        self.vocab = tuple(self.vocab)
        self.context_vocab = tuple(self.context_vocab)
        c = np.asarray(self.counts)
        if c.shape != (len(self.vocab), len(self.context_vocab)):
            raise ValueError(
                f"count matrix shape {c.shape} does not match vocabularies"
            )
        if c.size and c.min() < 0:
            raise ValueError("negative counts")
        self.counts = c.astype(np.int64)


def count_cooccurrences(
    sentences: Iterable,
    vocab: Sequence[str],
    context_vocab: Sequence[str],
    window: int = 5,
) -> CooccurrenceCounts:
    """Count symmetric-window co-occurrences, one sentence per item.

    A target at position i sees contexts at positions j with
    0 < |i - j| <= window in the same sentence; windows never cross
    sentence boundaries and a token is never its own context (though a
    second occurrence of the same word in range does count).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if not vocab or not context_vocab:
        raise ValueError("empty vocabulary")
    row = {w: i for i, w in enumerate(vocab)}
    col = {w: i for i, w in enumerate(context_vocab)}
    counts = np.zeros((len(vocab), len(context_vocab)), dtype=np.int64)
    n_sentences = 0
    for sentence in sentences:
        toks = _tokens(sentence)
        if not toks:
            continue
        n_sentences += 1
        for i, tok in enumerate(toks):
            r = row.get(tok)
            if r is None:
                continue
            lo = max(0, i - window)
            hi = min(len(toks), i + window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                c = col.get(toks[j])
                if c is not None:
                    counts[r, c] += 1
    if n_sentences == 0:
        raise ValueError("empty corpus")
    return CooccurrenceCounts(
        vocab=tuple(vocab),
        context_vocab=tuple(context_vocab),
        counts=counts,
        window=window,
    )


def pmi_weight(counts: CooccurrenceCounts) -> np.ndarray:
    """Positive pointwise mutual information of a count matrix.

    Cell (w, c) becomes max(0, log p(w,c) - log p(w) - log p(c)) under the
    empirical joint; zero-count cells stay zero.
    """
    c = counts.counts.astype(float)
    total = c.sum()
    if total <= 0:
        raise ValueError("count matrix is all zero")
    rows = c.sum(axis=1, keepdims=True)
    cols = c.sum(axis=0, keepdims=True)
    out = np.zeros_like(c)
    mask = c > 0
    # log[p(w,c) / (p(w) p(c))] = log[n_wc * N / (n_w n_c)]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (c * total) / (rows * cols)
    out[mask] = np.log(ratio[mask])
    np.clip(out, 0.0, None, out=out)
    return out


@dataclass
class NmfModel:
    """Factors of X ~= W @ H with the per-iteration Frobenius errors."""

    W: np.ndarray
    H: np.ndarray
    objective_trace: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.W.min() < 0 or self.H.min() < 0:
            raise ValueError("NMF factors must be nonnegative")


def nmf(
    x,
    k: int,
    max_iter: int = 300,
    tol: float = 1e-6,
    seed: int = 0,
) -> NmfModel:
    """Multiplicative-update nonnegative factorisation of a matrix.

    Minimises the Frobenius error with the classic interleaved updates
    H <- H * (W'X) / (W'WH) and W <- W * (XH') / (WHH'); denominators are
    floored at 1e-12 so the updates stay exact whenever they matter, which
    keeps the objective trace nonincreasing.  Stops at ``max_iter`` or
    when the relative improvement drops below ``tol``.  Fully determined
    by ``seed``.
    """
    X = np.asarray(x, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a matrix")
    if X.size == 0 or X.min() < 0:
        raise ValueError("NMF input must be nonnegative and non-empty")
    if not 1 <= k <= min(X.shape):
        raise ValueError(f"rank {k} outside [1, {min(X.shape)}]")
    rng = np.random.default_rng(seed)
    scale = np.sqrt(X.mean() / k) if X.mean() > 0 else 1.0
    W = scale * rng.random((X.shape[0], k)) + 1e-4
    H = scale * rng.random((k, X.shape[1])) + 1e-4
    floor = 1e-12
    trace = [float(np.linalg.norm(X - W @ H))]
    for _ in range(max_iter):
        H *= (W.T @ X) / np.maximum(W.T @ W @ H, floor)
        W *= (X @ H.T) / np.maximum(W @ H @ H.T, floor)
        err = float(np.linalg.norm(X - W @ H))
        prev = trace[-1]
        trace.append(err)
        if prev - err < tol * max(prev, 1e-30):
            break
    return NmfModel(W=W, H=H, objective_trace=trace)


@dataclass
class RelationalVerbMatrix:
    """A verb matrix assembled from its attested noun arguments.

    The matrix is sum_i c_i outer(v * n_i, n_i): output axis first,
    argument axis second, so that (matrix @ noun) is the phrase vector for
    either word order.  Constituents are kept so the closed-form
    composition and the recomputation check stay available; matrices
    loaded from file carry only the matrix.
    """

    matrix: np.ndarray
    verb_vector: np.ndarray | None = None
    argument_vectors: list[np.ndarray] | None = None
    argument_counts: list[float] | None = None
    label: str = ""

    @property
    def degenerate(self) -> bool:
        return float(np.abs(self.matrix).max(initial=0.0)) == 0.0

    def recomputed(self) -> np.ndarray:
        if self.verb_vector is None or self.argument_vectors is None:
            raise ValueError("constituent data not available")
        return build_relational_verb(
            self.verb_vector,
            self.argument_vectors,
            counts=self.argument_counts,
            label=self.label,
        ).matrix


def build_relational_verb(
    verb_vector,
    argument_vectors: Sequence,
    counts: Sequence[float] | None = None,
    label: str = "",
) -> RelationalVerbMatrix:
    """Assemble a relational verb matrix from attested arguments.

    ``counts`` weight each argument by how often it was attested
    (defaulting to once each).  A verb with no usable arguments raises;
    an all-zero verb vector yields a matrix flagged degenerate.
    """
    v = np.asarray(getattr(verb_vector, "entries", verb_vector), dtype=float)
    args = [
        np.asarray(getattr(a, "entries", a), dtype=float)
        for a in argument_vectors
    ]
    if not args:
        raise EntailkitError(f"verb {label or '?'}: no attested arguments")
    if counts is None:
        counts = [1.0] * len(args)
    if len(counts) != len(args):
        raise ValueError("argument counts do not match argument vectors")
    m = np.zeros((v.shape[0], v.shape[0]))
    for c, a in zip(counts, args):
        if a.shape != v.shape:
            raise ValueError("argument vector dimension mismatch")
        if c < 0:
            raise ValueError("negative argument count")
        m += c * np.outer(v * a, a)
    return RelationalVerbMatrix(
        matrix=m,
        verb_vector=v,
        argument_vectors=args,
        argument_counts=[float(c) for c in counts],
        label=label,
    )


def load_dependencies(path) -> dict[str, list[tuple[str, str, int]]]:
    """Parse verb-argument attestations: verb<TAB>relation<TAB>noun<TAB>count.

    Relations are ``subj`` or ``obj``; counts are positive integers.
    Blank lines and ``#`` comments are skipped.
    """
    deps: dict[str, list[tuple[str, str, int]]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split("\t")
            if len(parts) != 4:
                raise ModelIOError(
                    "expected verb<TAB>relation<TAB>noun<TAB>count",
                    path=path,
                    line_no=line_no,
                )
            verb, rel, noun, raw = (p.strip() for p in parts)
            if rel not in ("subj", "obj"):
                raise ModelIOError(
                    f"unknown relation {rel!r}", path=path, line_no=line_no
                )
            try:
                count = int(raw)
            except ValueError:
                raise ModelIOError(
                    f"bad count {raw!r}", path=path, line_no=line_no
                ) from None
            if count < 1:
                raise ModelIOError(
                    f"count must be positive, got {count}",
                    path=path,
                    line_no=line_no,
                )
            deps.setdefault(verb, []).append((rel, noun, count))
    return deps


def build_verb_matrices(
    dependencies: Mapping[str, Sequence[tuple[str, str, int]]],
    vectors: Mapping[str, np.ndarray],
) -> dict[str, RelationalVerbMatrix]:
    """Relational matrices for every verb whose vector and arguments exist.

    Arguments missing from the vector space are skipped; a verb with no
    usable argument at all is skipped entirely (it cannot compose).
    """
    out: dict[str, RelationalVerbMatrix] = {}
    for verb in sorted(dependencies):
        if verb not in vectors:
            continue
        args, counts = [], []
        for _rel, noun, count in dependencies[verb]:
            if noun in vectors:
                args.append(np.asarray(vectors[noun], dtype=float))
                counts.append(float(count))
        if not args:
            continue
        out[verb] = build_relational_verb(
            vectors[verb], args, counts=counts, label=verb
        )
    return out


def context_occurrences(
    sentences: Iterable,
    target: str,
    window: int = 5,
) -> list[list[str]]:
    """Window neighbours of each occurrence of ``target`` in the corpus.

    Each occurrence yields the other tokens within ``window`` positions in
    its sentence (the occurrence itself excluded).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    occurrences: list[list[str]] = []
    for sentence in sentences:
        toks = _tokens(sentence)
        for i, tok in enumerate(toks):
            if tok != target:
                continue
            lo = max(0, i - window)
            hi = min(len(toks), i + window + 1)
            occurrences.append(
                [toks[j] for j in range(lo, hi) if j != i]
            )
    return occurrences


def density_accumulate(
    occurrences: Sequence[Sequence[str]],
    word_vectors: Mapping[str, np.ndarray],
    weights: Sequence[float] | None = None,
) -> np.ndarray:
    """Un-normalised mixture sum_i p_i c_i c_i^T over context vectors.

    Each occurrence contributes the unit-normalised average of the
    vectors of its in-vocabulary neighbours; occurrences with no usable
    neighbour are skipped (their weight is dropped, not redistributed).
    """
    if weights is not None and len(weights) != len(occurrences):
        raise ValueError("weights do not match occurrences")
    acc = None
    used = 0
    for idx, occ in enumerate(occurrences):
        vecs = [
            np.asarray(word_vectors[t], dtype=float)
            for t in occ
            if t in word_vectors
        ]
        if not vecs:
            continue
        c = np.mean(vecs, axis=0)
        norm = float(np.linalg.norm(c))
        if norm <= 1e-14:
            continue
        c = c / norm
        w = 1.0 if weights is None else float(weights[idx])
        if w < 0:
            raise ValueError("negative occurrence weight")
        contrib = w * np.outer(c, c)
        acc = contrib if acc is None else acc + contrib
        used += 1
    if acc is None or used == 0:
        raise EntailkitError("no usable context occurrences")
    return acc


def build_density_word(
    occurrences: Sequence[Sequence[str]],
    word_vectors: Mapping[str, np.ndarray],
    weights: Sequence[float] | None = None,
    label: str = "",
) -> DensityMatrix:
    """A word's density operator as a trace-normalised context mixture.

    With ``weights`` omitted, occurrences weigh uniformly; pass counts to
    weight by frequency instead.
    """
    return normalize_trace(
        density_accumulate(occurrences, word_vectors, weights=weights),
        label=label,
    )


# ---------------------------------------------------------------------------
# text formats


def _write_lines(path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def _read_header(path, kind: str, n_fields: int) -> tuple[list[str], list[int]]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines:
        raise ModelIOError("empty file", path=path, line_no=1)
    head = lines[0].split()
    if len(head) != 1 + n_fields or head[0] != kind:
        raise ModelIOError(
            f"expected header '{kind}' with {n_fields} field(s), "
            f"got {lines[0]!r}",
            path=path,
            line_no=1,
        )
    try:
        fields = [int(tok) for tok in head[1:]]
    except ValueError:
        raise ModelIOError(
            f"non-integer header field in {lines[0]!r}", path=path, line_no=1
        ) from None
    if any(f < 1 for f in fields):
        raise ModelIOError(
            f"header fields must be positive: {lines[0]!r}",
            path=path,
            line_no=1,
        )
    return lines, fields


def _parse_floats(text: str, n: int, path, line_no: int) -> np.ndarray:
    parts = text.split()
    if len(parts) != n:
        raise ModelIOError(
            f"expected {n} values, got {len(parts)}", path=path, line_no=line_no
        )
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise ModelIOError(
            "unparseable float value", path=path, line_no=line_no
        ) from None


def store_vectors(path, vectors: Mapping[str, np.ndarray]) -> None:
    """Write 'vectors <D>' then one 'word v1 .. vD' line per word."""
    words = sorted(vectors)
    if not words:
        raise ValueError("no vectors to store")
    dim = np.asarray(vectors[words[0]]).shape[0]
    lines = [f"vectors {dim}"]
    for w in words:
        v = np.asarray(vectors[w], dtype=float)
        if v.shape != (dim,):
            raise ValueError(f"vector for {w!r} has dimension {v.shape}")
        lines.append(w + " " + " ".join(_FMT % x for x in v))
    _write_lines(path, lines)


def load_vectors(path) -> dict[str, np.ndarray]:
    lines, (dim,) = _read_header(path, "vectors", 1)
    out: dict[str, np.ndarray] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        word, _, rest = line.partition(" ")
        if not word or not rest:
            raise ModelIOError("expected 'word values...'", path=path, line_no=line_no)
        out[word] = _parse_floats(rest, dim, path, line_no)
    if not out:
        raise ModelIOError("no vectors in file", path=path, line_no=1)
    return out


def _store_word_matrices(path, kind, matrices) -> None:
    words = sorted(matrices)
    if not words:
        raise ValueError("no matrices to store")
    first = np.asarray(getattr(matrices[words[0]], "matrix", matrices[words[0]]))
    dim = first.shape[0]
    lines = [f"{kind} {dim}"]
    for w in words:
        m = np.asarray(getattr(matrices[w], "matrix", matrices[w]), dtype=float)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix for {w!r} has shape {m.shape}")
        lines.append(w)
        for row in m:
            lines.append(" ".join(_FMT % x for x in row))
    _write_lines(path, lines)


def _load_word_matrices(path, kind) -> dict[str, np.ndarray]:
    lines, (dim,) = _read_header(path, kind, 1)
    out: dict[str, np.ndarray] = {}
    i = 1
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        word = lines[i].strip()
        if len(word.split()) != 1:
            raise ModelIOError(
                f"expected a word line, got {lines[i]!r}", path=path, line_no=i + 1
            )
        if i + dim >= len(lines):
            raise ModelIOError(
                f"truncated matrix for {word!r}", path=path, line_no=i + 1
            )
        rows = []
        for r in range(dim):
            rows.append(_parse_floats(lines[i + 1 + r], dim, path, i + 2 + r))
        out[word] = np.vstack(rows)
        i += 1 + dim
    if not out:
        raise ModelIOError("no matrices in file", path=path, line_no=1)
    return out


def store_matrices(path, matrices: Mapping) -> None:
    """Write 'matrix <D>' then, per word, a word line and D rows of D values."""
    _store_word_matrices(path, "matrix", matrices)


def load_matrices(path) -> dict[str, np.ndarray]:
    return _load_word_matrices(path, "matrix")


def store_densities(path, densities: Mapping[str, DensityMatrix]) -> None:
    """Write 'density <D>' in the word-matrix layout."""
    _store_word_matrices(path, "density", densities)


def load_densities(path) -> dict[str, DensityMatrix]:
    """Load density operators, validating each on the way in."""
    raw = _load_word_matrices(path, "density")
    out: dict[str, DensityMatrix] = {}
    for word, m in raw.items():
        try:
            out[word] = DensityMatrix(m, label=word)
        except ValueError as exc:
            raise ModelIOError(
                f"invalid density for {word!r}: {exc}", path=path
            ) from exc
    return out


def store_counts(path, counts: CooccurrenceCounts) -> None:
    """Write 'counts <rows> <cols> <window>' then sparse 'i j c' triples."""
    c = counts.counts
    lines = [f"counts {c.shape[0]} {c.shape[1]} {counts.window}"]
    rows, cols = np.nonzero(c)
    for i, j in zip(rows, cols):
        lines.append(f"{i} {j} {c[i, j]}")
    _write_lines(path, lines)


def load_counts(
    path,
    vocab: Sequence[str] | None = None,
    context_vocab: Sequence[str] | None = None,
) -> CooccurrenceCounts:
    """Load a sparse count file.

    The format stores indices only, so vocabularies must be supplied to
    recover labels; placeholders w<i> and c<j> are used otherwise.
    """
    lines, (n_rows, n_cols, window) = _read_header(path, "counts", 3)
    if vocab is None:
        vocab = tuple(f"w{i}" for i in range(n_rows))
    if context_vocab is None:
        context_vocab = tuple(f"c{j}" for j in range(n_cols))
    if len(vocab) != n_rows or len(context_vocab) != n_cols:
        raise ModelIOError(
            f"vocabulary sizes {len(vocab)}x{len(context_vocab)} do not "
            f"match header {n_rows}x{n_cols}",
            path=path,
            line_no=1,
        )
    counts = np.zeros((n_rows, n_cols), dtype=np.int64)
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ModelIOError(
                "expected 'i j count'", path=path, line_no=line_no
            )
        try:
            i, j, c = (int(p) for p in parts)
        except ValueError:
            raise ModelIOError(
                "non-integer triple", path=path, line_no=line_no
            ) from None
        if not (0 <= i < n_rows and 0 <= j < n_cols) or c < 0:
            raise ModelIOError(
                f"triple ({i}, {j}, {c}) out of range", path=path, line_no=line_no
            )
        counts[i, j] = c
    return CooccurrenceCounts(
        vocab=tuple(vocab),
        context_vocab=tuple(context_vocab),
        counts=counts,
        window=window,
    )
