"""Exception types shared across the toolkit."""


class SphereGuideError(Exception):
    """Base class for all toolkit errors."""


class StaleIndexError(SphereGuideError):
    """A spatial index no longer matches the sphere cloud it was built for."""


class NonFiniteFieldError(SphereGuideError):
    """An implicit field returned NaN or infinity."""


class AllSpheresEmptyError(SphereGuideError):
    """Every sphere was marked empty; the cloud diverged from the field."""


class EmptyLevelSetError(SphereGuideError):
    """The requested level set does not cross the sampled grid."""


class NoValidRaysError(SphereGuideError):
    """No sphere projects into any training view."""


class ShapeMismatchError(SphereGuideError):
    """Array arguments have inconsistent shapes."""


class ConfigError(SphereGuideError):
    """A configuration file or override failed validation."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class UnknownSceneError(SphereGuideError):
    """The named analytic scene is not registered."""
