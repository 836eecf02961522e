"""Exception hierarchy shared by all modules."""


class AssouadProjError(Exception):
    """Base class for every error raised by this package."""


class InvalidWord(AssouadProjError, IndexError):
    pass


class InvalidInput(AssouadProjError, ValueError):
    pass


class DomainError(AssouadProjError, ValueError):
    pass


class ResourceLimit(AssouadProjError, RuntimeError):
    pass


class ResolutionError(AssouadProjError, ValueError):
    pass


class EmptySet(AssouadProjError, ValueError):
    pass


class GraphError(AssouadProjError, ValueError):
    pass


class Unsupported(AssouadProjError, NotImplementedError):
    pass


class ExactArithmeticRequired(AssouadProjError, TypeError):
    pass


class DegenerateSet(AssouadProjError, ValueError):
    pass


class ConfigError(AssouadProjError, ValueError):
    """Malformed IFS or experiment configuration."""
