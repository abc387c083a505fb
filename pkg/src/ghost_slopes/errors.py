"""Error taxonomy shared across the package.

The CLI maps these onto exit codes: configuration problems exit 1,
domain errors exit 2, verification failures exit 3.
"""


class ConfigError(ValueError):
    """Invalid context or run configuration (bad prime, bad mode, ...)."""


class DomainError(ValueError):
    """Structurally valid config applied to arguments outside its domain."""


class VerificationError(AssertionError):
    """An internal mathematical invariant failed to hold."""
