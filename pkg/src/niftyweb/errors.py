"""Typed handler failures shared by the server and the kernels."""


class BadQuery(Exception):
    """The query parameters are unusable; answered with 400."""


class HandlerFailure(Exception):
    """The handler (or wrapped program) failed; answered with 502."""


class HandlerTimeout(Exception):
    """The handler exceeded its time budget; answered with 504."""


class SpawnError(HandlerFailure):
    """A wrapped program could not be started."""
