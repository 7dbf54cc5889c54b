"""Exception types for the LLM gateway."""


class GatewayError(Exception):
    """Base class for gateway failures."""


class MissingVarError(GatewayError):
    """A prompt placeholder was not supplied."""

    def __init__(self, name: str):
        super().__init__(f"missing template variable {name!r}")
        self.name = name


class TagMissingError(GatewayError):
    """A required <tag>...</tag> block is absent or unclosed."""


class FormatError(GatewayError):
    """Tag content did not match the expected scalar/list format."""


class PlanParseError(GatewayError):
    """A structured JSON payload could not be parsed."""


class BackendError(GatewayError):
    """The backend failed to produce a response."""
