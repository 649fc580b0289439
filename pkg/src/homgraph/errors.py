"""Error types shared across the package."""


class HomgraphError(Exception):
    """Base class for errors raised by this package."""


class SpecError(HomgraphError, ValueError):
    """A module spec string or presentation failed validation."""


class CapExceeded(HomgraphError):
    """A configured size cap would be exceeded.

    Carries enough text to say which cap and by how much; the CLI maps
    this to exit code 2.
    """


class LocalityRequired(HomgraphError):
    """An operation that needs a local base ring was called over a non-local one."""


class NotApplicable(HomgraphError):
    """A probe's hypothesis is not met (e.g. socle equals the whole module)."""


class InternalInconsistency(HomgraphError):
    """Two routes that must agree disagreed, or a structural self-check failed.

    This is the fatal class: it means a bug, not bad input. The CLI maps
    it to exit code 3.
    """
