"""Bridge error types, mapped to exit code 2 by the CLI."""


class BridgeError(Exception):
    """Base class for bridge failures."""


class SchemaError(BridgeError):
    """Prompt or result JSON does not conform to its schema."""


class CheckpointError(BridgeError):
    """The segmenter checkpoint could not be loaded."""


class DimensionMismatchError(BridgeError):
    """Prompt JSON dimensions disagree with the actual image."""
