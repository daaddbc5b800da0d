"""Exception types shared across the toolkit."""

from __future__ import annotations


class OntEvalError(Exception):
    """Base class for every error raised by onteval."""


class RDFSyntaxError(OntEvalError, ValueError):
    """Malformed serialized RDF or query text."""

    def __init__(self, line: int, column: int, reason: str):
        self.line = line
        self.column = column
        self.reason = reason
        super().__init__(f"line {line}, column {column}: {reason}")


class ModelError(OntEvalError):
    pass


class CyclicGraphError(OntEvalError):
    """The subclass hierarchy contains a cycle where a DAG is required."""

    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("subclass hierarchy is cyclic: " + " -> ".join(cycle))


class PlanError(OntEvalError):
    pass


class EmptyReferenceError(OntEvalError, ValueError):
    pass


class ValidationError(OntEvalError, ValueError):
    pass


class DuplicateDocIdError(OntEvalError, ValueError):
    pass


class EmptyCorpusError(OntEvalError, ValueError):
    pass


class UnboundProjectionError(OntEvalError, ValueError):
    def __init__(self, variables: list[str]):
        self.variables = variables
        super().__init__("projected variables not used in any pattern: " + ", ".join("?" + v for v in variables))


class FixpointOverflowError(OntEvalError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"materialization exceeded the cap of {cap} derived triples")


class ConfigError(OntEvalError):
    pass


class InputIOError(OntEvalError):
    """An input path named by the configuration cannot be read."""
