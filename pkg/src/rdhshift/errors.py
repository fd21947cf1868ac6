"""Exception hierarchy shared by the codec, file formats and the CLI."""


class RDHError(Exception):
    """Base class for every error raised by rdhshift."""

    exit_code = 1


class BoundsError(RDHError, IndexError):
    """A coordinate lies outside the image or lacks the neighbours an operation needs."""


class FormatError(RDHError, ValueError):
    """Malformed image, metadata or payload, or mismatched dimensions."""


class CapacityError(RDHError):
    """The payload does not fit, or the histogram cannot host a lossless shift."""

    exit_code = 2


class CorruptStegoError(RDHError):
    """The stego image does not decode consistently with its metadata."""

    exit_code = 3
