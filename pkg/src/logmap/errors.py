"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class LogMapError(Exception):
    code = "Error"


class NotSharp(LogMapError):
    code = "NotSharp"


class CapExceeded(LogMapError):
    code = "CapExceeded"

    def __init__(self, cap):
        super().__init__(f"no multiple found up to cap={cap}; raise the cap")
        self.cap = cap


class NotAFace(LogMapError):
    code = "NotAFace"


class InvalidGraph(LogMapError):
    """Raised by :func:`logmap.graph.ensure_valid`; ``diagnostics`` lists every violation.

    ``codes`` gives the diagnostic codes, e.g. ``["LoopWithContact"]``.
    """

    code = "InvalidGraph"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))

    @property
    def codes(self):
        return [d.code for d in self.diagnostics]


class InvalidSpec(LogMapError):
    code = "InvalidSpec"


class ResultInvalid(LogMapError):
    code = "ResultInvalid"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("specialized graph is invalid: " + "; ".join(map(str, self.diagnostics)))


class RelationViolated(LogMapError):
    code = "RelationViolated"


class DegreeMismatch(LogMapError):
    code = "DegreeMismatch"

    def __init__(self, degree_sum, contact_sum):
        super().__init__(
            f"sum of multidegrees is {degree_sum} but minus the sum of leg "
            f"contact orders is {-contact_sum}"
        )
        self.degree_sum = degree_sum
        self.contact_sum = contact_sum


class LimitExceeded(LogMapError):
    code = "LimitExceeded"


class NotAdmissible(LogMapError):
    code = "NotAdmissible"


class InternalInvariantError(LogMapError):
    """A computed object failed a consistency check that should always hold."""

    code = "InternalInvariantError"


class SchemaError(LogMapError):
    code = "SchemaError"

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
