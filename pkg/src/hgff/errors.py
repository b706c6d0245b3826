"""Exception types shared across the package."""


class HgffError(Exception):
    """Base class for all package errors."""


class InvalidPrime(HgffError):
    pass


class InternalError(HgffError):
    pass


class OrderUnavailable(HgffError):
    """Requested character order does not divide q - 1."""


class ConductorMismatch(HgffError):
    """Cyclotomic operands live in different rings Z[zeta_m]."""


class RoundingUncertain(HgffError):
    """A certified rounding could not be issued at the current precision."""


class PrecisionExhausted(HgffError):
    """Retries at escalating precision all failed."""


class NotPadicInteger(HgffError):
    """Rational argument has denominator divisible by p."""


class LiftOutOfRange(HgffError):
    """No integer representative within the requested symmetric bound."""


class NotAnIntegralForm(HgffError):
    """Eta product whose leading q-power is not an integer."""


class SingularReduction(HgffError):
    """Elliptic curve has bad reduction over the given field."""


class DataFormatError(HgffError):
    """Newform data file violates the expected schema."""


class NotNormalized(HgffError):
    """Newform data with a(1) != 1."""


class FetchError(HgffError):
    """Network or HTTP failure while fetching newform data."""


class LabelNotFound(HgffError):
    """The remote endpoint does not know the requested label."""


class IndexOutOfRange(HgffError):
    """Coefficient or embedding index outside the stored range."""


class NotRepresentable(HgffError):
    """Prime not representable by the requested quadratic form."""


class ClassMismatch(HgffError):
    """Prime lies outside the congruence class required by a sign function."""
