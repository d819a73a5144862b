"""Exception types shared across the workbench."""


class PackbenchError(Exception):
    """Base class for all workbench errors."""


# --- wire format / decoding ---

class MalformedOutput(PackbenchError):
    """Candidate output is not a parseable solution object."""


class UnknownItemIndex(MalformedOutput):
    """Solution references an item index outside 0..n-1."""


class NonNumericCoordinate(MalformedOutput):
    """A placement coordinate is not a finite number."""


# --- metrics ---

class NoBinsUsed(PackbenchError):
    """Utilization is undefined: the solution uses zero bins but the instance has items."""


# --- baselines ---

class ItemTooWide(PackbenchError):
    """An item is wider than the strip it must be packed into."""


class StripTooTall(PackbenchError):
    """A strip is taller than the bin height."""


class ItemTooLarge(PackbenchError):
    """An item does not fit inside a single bin."""


# --- generator ---

class BadParams(PackbenchError):
    """Generation parameters are out of range."""


# --- oracle ---

class TooLarge(PackbenchError):
    """Instance exceeds the exact solver's size limit."""


# --- llm provider ---

class ProviderError(PackbenchError):
    """A text-generation provider failed."""


class HttpProviderError(ProviderError):
    def __init__(self, status: int, body_excerpt: str):
        super().__init__(f"provider returned HTTP {status}: {body_excerpt}")
        self.status = status
        self.body_excerpt = body_excerpt


class CredentialMissing(ProviderError):
    """The API credential environment variable is not set."""


class FixtureExhausted(ProviderError):
    """The mock provider ran out of fixture responses."""


class NoCodeFound(PackbenchError):
    """No source code could be extracted from a model response."""


# --- evolution ---

class NoExemplars(PackbenchError):
    """Refinement prompt requested with no exemplars."""


class NoIslands(PackbenchError):
    """Exemplar selection requested with no islands."""
