"""Exception hierarchy shared by the library and the CLI.

Every exception carries a stable ``code`` string so the CLI can render
structured error objects without inspecting messages.
"""


class ChipFiringError(Exception):
    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class DimensionError(ChipFiringError, ValueError):
    code = "dimension"


class SingularMatrixError(ChipFiringError, ValueError):
    code = "singular"


class IntegralityError(ChipFiringError, ValueError):
    code = "not_integral"


class PreconditionError(ChipFiringError, ValueError):
    code = "precondition"


class InvalidConfigurationError(PreconditionError):
    code = "invalid_configuration"


class NotCriticalError(PreconditionError):
    code = "not_critical"


class DisconnectedGraphError(PreconditionError):
    code = "disconnected"


class UnknownVertexError(ChipFiringError, KeyError):
    code = "unknown_vertex"

    def __str__(self):
        return self.args[0]


class GraphStructureError(ChipFiringError, ValueError):
    code = "graph_structure"


class ResourceLimitError(ChipFiringError, RuntimeError):
    code = "resource_limit"


class SearchExhaustedError(ResourceLimitError):
    code = "search_exhausted"


class NonTerminationError(ResourceLimitError):
    code = "non_termination"


class UnsupportedFamilyError(ChipFiringError, ValueError):
    code = "unsupported"


class GraphParseError(ChipFiringError, ValueError):
    code = "parse"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, line=line)
        self.line = line
