"""Pregroup types, lexica, and planar reductions.

A pregroup grammar assigns words types built by concatenating basic types
and their iterated left/right adjoints.  A string of words is grammatical
when its concatenated type reduces to a designated target type by repeated
cancellation of adjacent pairs ``x . x^r`` and ``x^l . x``.  Reductions are
recorded as planar link diagrams over the flattened factor string, which is
exactly the data a tensor-contraction engine needs downstream.

>>> n, s = basic("n"), basic("s")
>>> str(n.r * s * n.l)
'n^r . s . n^l'
>>> reduce([n, n.r * s * n.l, n], s).links
((0, 1), (3, 4))
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    LexiconFormatError,
    UngrammaticalStringError,
    UnknownCategoryError,
)

__all__ = [
    "SimpleType",
    "PregroupType",
    "basic",
    "parse_type",
    "flatten",
    "Reduction",
    "reduce",
    "check_reduction",
    "Lexicon",
    "ParseResult",
    "parse",
    "make_standard_lexicon",
]


@dataclass(frozen=True, order=True)
class SimpleType:
    """A basic type with an adjoint order.

    ``adjoint`` counts iterated adjoints: 0 for the plain type, +1 for one
    right adjoint, -1 for one left adjoint, and so on.

    >>> SimpleType("n").r
    SimpleType(base='n', adjoint=1)
    """

    base: str
    adjoint: int = 0

    @property
    def l(self) -> "SimpleType":
        return SimpleType(self.base, self.adjoint - 1)

    @property
    def r(self) -> "SimpleType":
        return SimpleType(self.base, self.adjoint + 1)

    def __str__(self) -> str:
        if self.adjoint > 0:
            return self.base + "^" + "r" * self.adjoint
        if self.adjoint < 0:
            return self.base + "^" + "l" * (-self.adjoint)
        return self.base


@dataclass(frozen=True)
class PregroupType:
    """A finite product of simple types; the empty product is the unit.

    Products multiply by concatenation and adjoints reverse order, so that
    ``(p * q).l == q.l * p.l``.
    """

    factors: tuple[SimpleType, ...] = ()

    def __mul__(self, other: "PregroupType") -> "PregroupType":
        if not isinstance(other, PregroupType):
            return NotImplemented
        return PregroupType(self.factors + other.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    @property
    def l(self) -> "PregroupType":
        return PregroupType(tuple(f.l for f in reversed(self.factors)))

    @property
    def r(self) -> "PregroupType":
        return PregroupType(tuple(f.r for f in reversed(self.factors)))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " . ".join(str(f) for f in self.factors)


def basic(symbol: str) -> PregroupType:
    """A single plain basic type as a one-factor product."""
    if not symbol or any(ch.isspace() for ch in symbol):
        raise ValueError(f"invalid basic type symbol {symbol!r}")
    return PregroupType((SimpleType(symbol),))


def parse_type(text: str) -> PregroupType:
    """Parse ``"n^r s n^l"`` style notation (``.`` also separates factors).

    >>> parse_type("n^r s n^l") == basic("n").r * basic("s") * basic("n").l
    True
    """
    factors = []
    for token in text.replace(".", " ").split():
        base, caret, adj = token.partition("^")
        if not base:
            raise ValueError(f"invalid type token {token!r}")
        if caret and (not adj or set(adj) not in ({"l"}, {"r"})):
            raise ValueError(f"invalid adjoint suffix in {token!r}")
        order = len(adj) if adj.startswith("r") else -len(adj)
        factors.append(SimpleType(base, order))
    return PregroupType(tuple(factors))


def flatten(types: Iterable[PregroupType]) -> tuple[SimpleType, ...]:
    """Concatenate the factor strings of a sequence of types."""
    out: list[SimpleType] = []
    for t in types:
        out.extend(t.factors)
    return tuple(out)


def _cancels(left: SimpleType, right: SimpleType) -> bool:
    # x^(z) . x^(z+1) is the only adjacent pair a cancellation removes.
    return left.base == right.base and right.adjoint == left.adjoint + 1


@dataclass(frozen=True)
class Reduction:
    """A planar reduction of a flattened factor string.

    ``links`` are cancelled pairs as 0-based factor indices, sorted by
    (i, j); ``surviving`` lists the uncancelled indices in order.  Every
    index in ``range(n_factors)`` appears in exactly one link or in
    ``surviving``, and no two links cross.
    """

    links: tuple[tuple[int, int], ...]
    surviving: tuple[int, ...]
    n_factors: int

    def __post_init__(self):
        seen: set[int] = set()
        for i, j in self.links:
            if not 0 <= i < j < self.n_factors:
                raise ValueError(f"link ({i}, {j}) out of range")
            if i in seen or j in seen:
                raise ValueError("links are not pairwise disjoint")
            seen.update((i, j))
        for (i, j), (k, l) in itertools.combinations(self.links, 2):
            if i < k < j < l or k < i < l < j:
                raise ValueError(f"links ({i},{j}) and ({k},{l}) cross")
        if seen & set(self.surviving):
            raise ValueError("a factor is both linked and surviving")
        if seen | set(self.surviving) != set(range(self.n_factors)):
            raise ValueError("links and survivors do not cover all factors")
        if list(self.surviving) != sorted(self.surviving):
            raise ValueError("surviving indices must be ordered")


def check_reduction(
    types: Sequence[PregroupType],
    reduction: Reduction,
    target: PregroupType | None = None,
) -> None:
    """Assert a reduction is valid for the given types (and target).

    Raises ValueError on any violation: link ends must cancel, links must
    not cross, and no survivor may sit under a link arc.
    """
    factors = flatten(types)
    if reduction.n_factors != len(factors):
        raise ValueError("factor count mismatch")
    for i, j in reduction.links:
        if not _cancels(factors[i], factors[j]):
            raise ValueError(f"link ({i}, {j}) joins non-cancelling factors")
        for p in reduction.surviving:
            if i < p < j:
                raise ValueError(f"survivor {p} sits under link ({i}, {j})")
    if target is not None:
        got = tuple(factors[p] for p in reduction.surviving)
        if got != target.factors:
            raise ValueError(
                f"survivors reduce to {PregroupType(got)}, not {target}"
            )


def reduce(
    types: Sequence[PregroupType], target: PregroupType
) -> Reduction:
    """Find a planar reduction of ``types`` onto ``target``.

    The search runs left to right, either cancelling the current factor
    against the most recent open one, letting it survive (only when no
    factor is still open, since a survivor may not sit under a link arc),
    or leaving it open; dead ends backtrack.  Among all complete
    reductions the one with lexicographically smallest links is returned,
    so ties between grammatical analyses break deterministically.

    Raises UngrammaticalStringError, carrying the most advanced partial
    reduction, when no reduction exists.
    """
    if not types:
        raise ValueError("empty type sequence")
    if not target.factors:
        raise ValueError("empty target type")
    factors = flatten(types)
    goal = target.factors
    m, k = len(factors), len(goal)

    solutions: list[tuple[tuple[int, int], ...]] = []
    best: tuple[int, int, tuple, tuple] = (-1, -1, (), ())

    def walk(pos, stack, matched, links, survivors):
        nonlocal best
        score = (len(links) + matched, pos)
        if score > best[:2]:
            best = (*score, tuple(links), tuple(survivors))
        if m - pos < len(stack) + (k - matched):
            return  # not enough factors left to close every open one
        if pos == m:
            if not stack and matched == k:
                solutions.append(tuple(sorted(links)))
            return
        if stack and _cancels(factors[stack[-1]], factors[pos]):
            links.append((stack[-1], pos))
            walk(pos + 1, stack[:-1], matched, links, survivors)
            links.pop()
        if not stack and matched < k and factors[pos] == goal[matched]:
            survivors.append(pos)
            walk(pos + 1, stack, matched + 1, links, survivors)
            survivors.pop()
        walk(pos + 1, stack + (pos,), matched, links, survivors)

    walk(0, (), 0, [], [])
    if not solutions:
        raise UngrammaticalStringError(
            f"no reduction of {' , '.join(str(t) for t in types)} onto "
            f"{target}",
            partial_links=best[2],
            partial_survivors=best[3],
        )
    links = min(solutions)
    linked = {i for pair in links for i in pair}
    surviving = tuple(i for i in range(m) if i not in linked)
    return Reduction(links=links, surviving=surviving, n_factors=m)


class Lexicon:
    """Words mapped to pregroup types via named categories.

    Each word may carry several types; ``parse`` backtracks over them in
    insertion order.
    """

    def __init__(self, categories: Mapping[str, PregroupType]):
        self._categories = dict(categories)
        self._entries: dict[str, list[PregroupType]] = {}

    def category(self, name: str) -> PregroupType:
        try:
            return self._categories[name]
        except KeyError:
            raise UnknownCategoryError(
                f"unknown category {name!r}; known: "
                + ", ".join(sorted(self._categories))
            ) from None

    def add(self, word: str, category: str | PregroupType) -> None:
        t = category if isinstance(category, PregroupType) else self.category(category)
        slot = self._entries.setdefault(word, [])
        if t not in slot:
            slot.append(t)

    def types(self, word: str) -> tuple[PregroupType, ...]:
        if word not in self._entries:
            raise UnknownCategoryError(f"word {word!r} not in lexicon")
        return tuple(self._entries[word])

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self._entries)

    def load(self, path) -> "Lexicon":
        """Add entries from a two-column file: ``word<TAB>category``.

        Blank lines and ``#`` comments are skipped.  Unknown categories and
        malformed lines raise with the offending line number.
        """
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                parts = text.split("\t")
                if len(parts) != 2:
                    raise LexiconFormatError(
                        f"{path}:{line_no}: expected 'word<TAB>category', "
                        f"got {text!r}"
                    )
                word, cat = parts[0].strip(), parts[1].strip()
                try:
                    self.add(word, cat)
                except UnknownCategoryError as exc:
                    raise LexiconFormatError(
                        f"{path}:{line_no}: {exc}"
                    ) from exc
        return self


def make_standard_lexicon(basic_types: Sequence[str] = ("n", "s")) -> Lexicon:
    """An empty lexicon with the standard grammatical categories.

    Nouns get type n, adjectives n . n^l, intransitive verbs n^r . s and
    transitive verbs n^r . s . n^l.  Short file-format aliases (noun, adj,
    iverb, tverb) map to the same types.
    """
    if "n" not in basic_types or "s" not in basic_types:
        raise ValueError("standard categories need basic types 'n' and 's'")
    n, s = basic("n"), basic("s")
    categories = {
        "noun": n,
        "adjective": n * n.l,
        "adj": n * n.l,
        "intransitive verb": n.r * s,
        "iverb": n.r * s,
        "transitive verb": n.r * s * n.l,
        "tverb": n.r * s * n.l,
    }
    for b in basic_types:
        categories.setdefault(b, basic(b))
    return Lexicon(categories)


@dataclass(frozen=True)
class ParseResult:
    """A successful parse: the chosen types, their reduction, and how many
    alternative type assignments would also have parsed."""

    word_types: tuple[PregroupType, ...]
    reduction: Reduction
    alternatives: int


def parse(
    words: Sequence[str], lexicon: Lexicon, target: PregroupType
) -> ParseResult:
    """Reduce a word string under a lexicon, backtracking over type choices.

    Assignments are tried in lexicon insertion order; the first that
    reduces wins and the count of further grammatical assignments is
    reported in ``alternatives``.
    """
    if not words:
        raise ValueError("empty word string")
    choices = [lexicon.types(w) for w in words]
    found: ParseResult | None = None
    extra = 0
    failure: UngrammaticalStringError | None = None
    for assignment in itertools.product(*choices):
        try:
            red = reduce(assignment, target)
        except UngrammaticalStringError as exc:
            if failure is None:
                failure = exc
            continue
        if found is None:
            found = ParseResult(tuple(assignment), red, 0)
        else:
            extra += 1
    if found is None:
        assert failure is not None
        raise UngrammaticalStringError(
            f"no parse of {' '.join(words)} onto {target}",
            partial_links=failure.partial_links,
            partial_survivors=failure.partial_survivors,
        )
    return ParseResult(found.word_types, found.reduction, extra)
