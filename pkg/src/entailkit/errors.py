"""Shared exception types.

Plain contract violations (bad shapes, unnormalised inputs, invalid
parameters) raise ValueError directly at the call site; the classes here
exist for conditions that callers are expected to catch and handle.
"""


class EntailkitError(Exception):
    """Base class for package-specific errors."""


class UnknownCategoryError(EntailkitError):
    """A lexicon category name that the lexicon does not define."""


class LexiconFormatError(EntailkitError):
    """A lexicon file line that cannot be parsed."""


class UngrammaticalStringError(EntailkitError):
    """No planar reduction of the given type sequence reaches the target.

    ``partial_links`` and ``partial_survivors`` hold the most advanced
    partial reduction the search reached, for diagnostics.
    """

    def __init__(self, message, partial_links=(), partial_survivors=()):
        super().__init__(message)
        self.partial_links = tuple(partial_links)
        self.partial_survivors = tuple(partial_survivors)


class DegeneratePhraseError(EntailkitError):
    """Composition produced an all-zero phrase (no support overlap).

    Callers decide policy; the evaluation harness scores such phrases as
    non-entailing rather than dropping them.
    """


class MissingWordError(EntailkitError, KeyError):
    """A word required for scoring is absent from a model store."""

    def __init__(self, word, store=""):
        msg = f"word {word!r} missing" + (f" from {store}" if store else "")
        super().__init__(msg)
        self.word = word
        self.store = store

    def __str__(self):
        return self.args[0]


class ModelIOError(EntailkitError):
    """A model file (vectors, matrices, densities, counts) failed to parse."""

    def __init__(self, message, path="", line_no=None):
        loc = str(path)
        if line_no is not None:
            loc += f":{line_no}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = str(path)
        self.line_no = line_no


class DatasetFormatError(ModelIOError):
    """A phrase-entailment dataset line failed to parse or validate."""


class ExperimentError(EntailkitError):
    """An evaluation run could not produce a meaningful report."""
