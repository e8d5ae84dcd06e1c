"""Exception hierarchy shared across the package."""


class ParetoInterpError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ParetoInterpError, ValueError):
    """Malformed user input: bad dimensions, empty sample sets, invalid configs."""


class ConfigError(InputError):
    """A configuration file is missing or violates its schema."""


class OracleError(ParetoInterpError):
    """The black box failed to answer a query or produced an unmappable output."""


class SolverError(ParetoInterpError):
    """A MaxSAT backend failed or returned an inconsistent answer."""


class ExternalSolverError(SolverError):
    pass


class ConsistencyError(ParetoInterpError):
    """Internal invariant broken, e.g. a model decoding to an ambiguous diagram."""
