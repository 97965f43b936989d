"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class CorpusMixerError(Exception):
    """Base class for all toolkit errors."""


class UnknownLabel(CorpusMixerError):
    def __init__(self, name: str, kind: str):
        super().__init__(f"unknown {kind} label: {name!r}")
        self.name = name
        self.kind = kind


class DuplicateDocId(CorpusMixerError):
    pass


class InvalidCategory(CorpusMixerError):
    pass


class MalformedRecord(CorpusMixerError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        loc = f"{path or '<stream>'}:{line}" if line is not None else (path or "<stream>")
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.path = path


class EmptyCorpus(CorpusMixerError):
    pass


class MissingAnnotation(CorpusMixerError):
    pass


class DegenerateMarginals(CorpusMixerError):
    pass


class TaxonomyMismatch(CorpusMixerError):
    pass


class InvalidMixture(CorpusMixerError):
    pass


class InvalidTemperature(CorpusMixerError):
    pass


class EmptySelection(CorpusMixerError):
    pass


class InvalidAlpha(CorpusMixerError):
    pass


class CapInfeasible(CorpusMixerError):
    pass


class InsufficientData(CorpusMixerError):
    pass


class TargetMissing(CorpusMixerError):
    pass


class LengthMismatch(CorpusMixerError):
    pass


class ArityTooLarge(CorpusMixerError):
    pass


class NoFeasibleCandidate(CorpusMixerError):
    pass


class MissingScore(CorpusMixerError):
    def __init__(self, doc_id: str, score_name: str):
        super().__init__(f"document {doc_id!r} has no score {score_name!r}")
        self.doc_id = doc_id
        self.score_name = score_name


class InsufficientCorpus(CorpusMixerError):
    pass


class TooFewPoints(CorpusMixerError):
    pass


class DimensionMismatch(CorpusMixerError):
    pass


class InvalidSpec(CorpusMixerError):
    pass
