"""onteval: purpose-driven evaluation of (agricultural) ontologies."""

__version__ = "0.1.0"
