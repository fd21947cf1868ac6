"""Reversible data hiding in 8-bit grayscale images by fluctuation-ordered,
double-peak prediction-error histogram shifting."""

from .codec import EmbedResult, EmbedStats, OrderMode, capacity, embed, extract, net_capacity
from .errors import BoundsError, CapacityError, CorruptStegoError, FormatError, RDHError
from .image import GrayImage, ParitySet
from .metadata import StegoMetadata

__version__ = "0.1.0"

__all__ = [
    "BoundsError",
    "CapacityError",
    "CorruptStegoError",
    "EmbedResult",
    "EmbedStats",
    "FormatError",
    "GrayImage",
    "OrderMode",
    "ParitySet",
    "RDHError",
    "StegoMetadata",
    "capacity",
    "embed",
    "extract",
    "net_capacity",
]
