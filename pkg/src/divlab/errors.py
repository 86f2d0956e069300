"""Shared exception types."""


class ResourceCapError(Exception):
    """A computation was refused because it exceeds a documented size cap."""
