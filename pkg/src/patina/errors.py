"""Exception hierarchy shared by every module.

Each error carries a stable machine-readable ``code`` that the HTTP layer
and the CLI surface verbatim.
"""

from __future__ import annotations


class PatinaError(Exception):
    code = "error"


class ValidationFailed(PatinaError):
    code = "validation_failed"


class InvalidAnchor(ValidationFailed):
    code = "invalid_anchor"


class OutOfBounds(InvalidAnchor):
    code = "out_of_bounds"


class ZeroArea(InvalidAnchor):
    code = "zero_area"


class NoAnchors(ValidationFailed):
    code = "no_anchors"


class ReplyToReply(ValidationFailed):
    code = "reply_to_reply"


class UnknownCategoryFilter(ValidationFailed):
    code = "unknown_category_filter"


class UnknownEncoding(ValidationFailed):
    code = "unknown_encoding"


class NotFound(PatinaError):
    code = "not_found"


class InvalidImage(PatinaError):
    code = "invalid_image"


class IoFailure(PatinaError):
    code = "io_failure"


class MalformedInput(PatinaError):
    """Ingest input could not be parsed; message carries line/offset context."""

    code = "malformed_input"


class EmptyCorpus(PatinaError):
    code = "empty_corpus"
