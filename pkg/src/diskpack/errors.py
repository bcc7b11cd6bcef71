"""Exception hierarchy shared by all solver modules."""


class DiskPackError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(DiskPackError):
    """Bad instance data, parameters, or file contents."""


class CapExceededError(DiskPackError):
    """A size cap would be exceeded (oracle n, MWIS nodes, layout points)."""


class MalformedGraphError(DiskPackError):
    """A constraint graph does not admit the requested structure."""


class ConstructionError(DiskPackError):
    """A gadget layout cannot be embedded without collisions."""


class InfeasibleResultError(DiskPackError):
    """A solver produced radii that violate the packing constraints."""
