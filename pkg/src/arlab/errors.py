"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for all package-specific errors."""


class HorizonExceeded(LabError):
    """An evaluation needed a position beyond a generator's horizon."""


class EnumerationTooLarge(LabError):
    """A class constructor was asked to enumerate more generators than its cap."""


class HorizonTooSmall(LabError):
    """A construction needs sequence positions beyond the requested horizon."""


class RateNotNormalized(LabError):
    """A rate table with r(1) != 1 was passed where r(1) = 1 is required."""


class RateInvalid(LabError):
    """A rate table violates monotonicity or subadditivity."""


class SearchCapExceeded(LabError):
    """A bounded search exhausted its cap without an answer."""


class DepthCapExceeded(LabError):
    """A tree is deeper than the configured bound for subtree search."""


class NotRealizable(LabError):
    """No generator in the class is consistent with the given sample."""


class OriginMissing(LabError):
    """An inflated example lacks the provenance needed to deflate it."""


class BoostingFailed(LabError):
    """Boosting exhausted its round or retry budget (s too small, or the
    input is not realizable)."""


class NotSeparable(LabError):
    """The sample is not strictly linearly separable in the tail encoding."""


class Unlearnable(LabError):
    """No sample size up to the configured cap met the (eps, delta) target."""


class SpecParseError(LabError):
    """A class-spec file is malformed; the message names the offending field."""
