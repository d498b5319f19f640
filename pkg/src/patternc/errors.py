"""Error types shared across the toolkit.

Every raisable error carries a stable ``code`` string so CLI and HTTP
layers can map failures to machine-readable reports without matching on
message text.
"""

from __future__ import annotations


class PatterncError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "ERROR"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self)}


class ConfigSyntaxError(PatterncError):
    """Input text is not parseable JSON (after tolerated-typo repair)."""

    code = "SYNTAX_ERROR"

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        d = super().to_dict()
        if self.line is not None:
            d["line"] = self.line
            d["column"] = self.column
        return d


class RangeError(PatterncError):
    """Raw value outside the registry range for its field."""

    code = "OUT_OF_RANGE"

    def __init__(self, message: str, *, path: str):
        super().__init__(message)
        self.path = path

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["path"] = self.path
        return d


class BuildError(PatterncError):
    """A panel builder could not produce usable geometry.

    Codes: UNSUPPORTED_KIND, DEGENERATE_GEOMETRY, SOLVE_FAILED.
    """

    code = "BUILD_ERROR"


class CompositionError(PatterncError):
    """Parts built fine but could not be joined into one pattern."""

    code = "COMPOSITION_ERROR"


class CodecError(PatterncError):
    """Vector/mask/skeleton disagreement during decode.

    Codes: MASK_SKELETON_MISMATCH, BAD_VECTOR_SHAPE.
    """

    code = "CODEC_ERROR"


class EditPairError(PatterncError):
    """Edit-pair generation failed. Codes: NO_DIFFERENCE."""

    code = "EDIT_PAIR_ERROR"


class MaterialError(PatterncError):
    """Material mapping failed. Codes: UNKNOWN_MATERIAL, NONPOSITIVE_RESULT."""

    code = "MATERIAL_ERROR"


class MetricsError(PatterncError):
    """Pattern comparison failed. Codes: EMPTY_PATTERN."""

    code = "METRICS_ERROR"
