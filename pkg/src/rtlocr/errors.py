"""Exception hierarchy.

``RtlOcrError`` is the base for everything raised deliberately; ``DataError``
subclasses indicate bad input data (CLI exit code 2) as opposed to usage or
internal faults.
"""


class RtlOcrError(Exception):
    pass


class DataError(RtlOcrError):
    """Problems with user-supplied data (images, datasets, manifests)."""


# imaging
class UnsupportedFormat(DataError):
    pass


class CorruptImage(DataError):
    pass


class EmptyLine(DataError):
    pass


# script
class EmptyCorpus(DataError):
    pass


class UnknownChar(DataError):
    def __init__(self, char: str, position: int):
        super().__init__(f"character {char!r} at position {position} not in codec")
        self.char = char
        self.position = position


class UnknownLabel(DataError):
    def __init__(self, label: int):
        super().__init__(f"label {label} not valid for this codec")
        self.label = label


# net
class ShapeMismatch(RtlOcrError):
    pass


class InfeasibleTarget(DataError):
    """Target label sequence cannot be emitted in the available frames."""


class StaleCache(RtlOcrError):
    """Backward pass invoked with a cache from a different forward call."""


# train
class TooFewSamples(DataError):
    pass


class CodecCoverage(DataError):
    pass


# store
class IoFailure(RtlOcrError):
    pass


class BadMagic(DataError):
    pass


class UnsupportedVersion(DataError):
    pass


class ChecksumMismatch(DataError):
    pass


class EmptyDataset(DataError):
    pass


# transcribe
class NoLinesFound(DataError):
    pass


class MalformedManifest(DataError):
    pass


class DigestMismatch(DataError):
    pass
