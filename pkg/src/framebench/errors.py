"""Exception and warning types shared across the toolkit."""


class FramebenchError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedCharacter(FramebenchError):
    """A character outside the transliteration table and pass-through set."""

    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"unsupported character {char!r} at position {position}")


class SchemaViolation(FramebenchError):
    """An XML document does not match the expected schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class DuplicateId(FramebenchError):
    def __init__(self, ident: str):
        self.ident = ident
        super().__init__(f"duplicate id {ident!r}")


class FormatError(FramebenchError):
    """A resource file line could not be parsed."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


class DanglingCategory(FramebenchError):
    def __init__(self, name: str, message: str = ""):
        self.name = name
        super().__init__(message or f"category {name!r} not covered by compatibility tables")


class DanglingFrame(FramebenchError):
    def __init__(self, lu_id: str, frame_name: str):
        self.lu_id = lu_id
        self.frame_name = frame_name
        super().__init__(f"lexical unit {lu_id!r} references missing frame {frame_name!r}")


class UnknownFrame(FramebenchError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown frame {name!r}")


class UnknownFE(FramebenchError):
    def __init__(self, value: str, frame_name: str):
        self.value = value
        self.frame_name = frame_name
        super().__init__(f"{value!r} is not a frame element of {frame_name!r}")


class BadSpan(FramebenchError):
    def __init__(self, span, message: str = "span out of bounds"):
        self.span = span
        super().__init__(f"{message}: {span}")


class OverlapViolation(FramebenchError):
    def __init__(self, span, other):
        self.span = span
        self.other = other
        super().__init__(f"span {span} overlaps existing label at {other}")


class NotValidated(FramebenchError):
    def __init__(self, violations):
        self.violations = list(violations)
        msgs = "; ".join(str(v) for v in self.violations)
        super().__init__(f"annotation set fails validation: {msgs}")


class MissingAlignment(FramebenchError):
    def __init__(self, span, layer: str):
        self.span = span
        self.layer = layer
        super().__init__(f"frame element span {span} lacks a {layer} value")


class ValidationFailed(FramebenchError):
    def __init__(self, aset_id: str, violations):
        self.aset_id = aset_id
        self.violations = list(violations)
        super().__init__(f"annotation set {aset_id!r} fails validation")


class NoRoot(FramebenchError):
    """No finite verb or nominal predicate can anchor the clause."""


class StaleRevision(FramebenchError):
    def __init__(self, aset_id: str, expected: int, got: int):
        self.aset_id = aset_id
        self.expected = expected
        self.got = got
        super().__init__(
            f"annotation set {aset_id!r} is at revision {expected}, request carried {got}"
        )


class ManifestMismatch(FramebenchError):
    def __init__(self, resource: str, message: str = ""):
        self.resource = resource
        super().__init__(message or f"manifest mismatch for resource {resource!r}")


class UnknownLemmaWarning(UserWarning):
    """Concordance query lemma is absent from the lexicon."""


class NonProjectiveWarning(UserWarning):
    """A dependency subtree is discontiguous; the constituent was split."""
