"""Exception taxonomy shared across the package.

Row-level ingest failures are caught by the loaders and tallied in the
report under the exception class name; everything else propagates.
"""


class SvipanelError(Exception):
    """Base class for all package-specific failures."""


# --- ingest -----------------------------------------------------------------

class MalformedHeader(SvipanelError):
    """CSV header row does not match the required schema."""


class MalformedRow(SvipanelError, ValueError):
    """Row has the wrong field count or an unparseable field."""


class RangeViolation(SvipanelError, ValueError):
    """A parsed value lies outside its documented range."""


class DuplicateKey(SvipanelError):
    """A second row arrived for a key that must be unique."""


class UnknownBucket(SvipanelError, ValueError):
    """Order-size bucket label outside B1..B4."""


class NegativeCount(RangeViolation):
    """Order or share count below zero."""


# --- attention metrics ------------------------------------------------------

class InsufficientHistory(SvipanelError):
    """Trailing window has fewer usable observations than required."""


class ZeroSvi(SvipanelError):
    """A zero search-volume value where the log-ratio needs a positive one."""


class ZeroDispersion(SvipanelError):
    """Trailing standard deviation is zero; standardization undefined."""


class NonPositiveInput(SvipanelError, ValueError):
    """Log-difference requested for a non-positive value."""


class DegenerateCrossSection(SvipanelError):
    """Cross-section too small or constant; z-scores undefined."""


class EmptyMonth(SvipanelError):
    """Monthly aggregate requested for a month with no weekly rows."""


class MissingFutureWeeks(SvipanelError):
    """Forward-return horizon extends past the available weeks."""


# --- estimators -------------------------------------------------------------

class TooFewObservations(SvipanelError):
    """Sample smaller than the estimator's stated floor."""


class RankDeficient(SvipanelError):
    """Design matrix not of full column rank."""


class TooFewWeeks(SvipanelError):
    """Fewer valid weekly cross-sections than the estimator requires."""


class RepsTooSmall(SvipanelError):
    """Bootstrap replication count below the supported minimum."""


class InsufficientOverlap(SvipanelError):
    """Pairwise-complete overlap shorter than the correlation floor."""


class EmptyInput(SvipanelError):
    """An aggregate over zero elements."""


# --- studies ----------------------------------------------------------------

class TooFewIpos(SvipanelError):
    """IPO split leaves a group below the minimum size."""


class InvalidRange(SvipanelError, ValueError):
    """Filing range violates 0 < low <= high."""


class EmptyWindow(SvipanelError):
    """Date window contains no observations."""


# --- synth / config ---------------------------------------------------------

class InvalidConfig(SvipanelError, ValueError):
    """Configuration value outside its documented domain."""
