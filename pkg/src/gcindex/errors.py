"""Exception hierarchy shared by every index."""


class GCIndexError(Exception):
    pass


class GrammarError(GCIndexError):
    """A grammar failed validation."""


class CyclicRule(GrammarError):
    pass


class DanglingReference(GrammarError):
    pass


class LengthMismatch(GrammarError):
    pass


class NotCNF(GrammarError):
    pass


class UnreachableRule(GrammarError):
    pass


class EmptyInput(GrammarError, ValueError):
    pass


class InvalidGrammarFile(GrammarError):
    pass


class PositionOutOfRange(GCIndexError, IndexError):
    pass


class OccurrenceOutOfRange(GCIndexError, IndexError):
    pass


class DagError(GCIndexError):
    pass


class CyclicInput(DagError):
    pass


class NoSink(DagError):
    pass


class UnknownNode(DagError, KeyError):
    pass


class NotASink(DagError):
    pass


class PathCountOverflow(DagError):
    pass


class CorruptIndex(GCIndexError):
    pass
