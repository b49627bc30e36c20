"""Exception types raised by the synth-audit library.

Every error that can surface from loading data, validating configuration,
or evaluating a metric derives from :class:`SynthAuditError`, so callers
(including the CLI and the batch evaluator) can catch one base type.
"""


class SynthAuditError(Exception):
    """Base class for all library errors."""


class SchemaMismatchError(SynthAuditError):
    """CSV header or column layout does not match the declared schema."""


class UnknownAttributeError(SynthAuditError):
    """An attribute name was requested that the schema does not define."""


class NonFiniteValueError(SynthAuditError):
    """A numerical cell parsed to NaN or infinity."""


class InvalidValueError(SynthAuditError):
    """A cell value is outside its attribute's domain (e.g. binary not 0/1)."""


class MissingValueError(SynthAuditError):
    """A record has an empty cell; complete tuples are required."""


class EmptyDatasetError(SynthAuditError):
    """A dataset contains no records."""


class ConfigError(SynthAuditError):
    """A metric configuration violates its invariants."""


class DegenerateEntropyError(SynthAuditError):
    """Record-level entropy of the real dataset is zero, so entropy
    weights are undefined (all rows identical)."""


class InsufficientRealRecordsError(SynthAuditError):
    """A metric needs more real records than were provided (e.g. a
    second-nearest real neighbour requires at least two rows)."""


class MissingGenerationMapError(SynthAuditError):
    """A generation map is required but not available: none was supplied
    and the datasets differ in size, so index alignment cannot apply."""
