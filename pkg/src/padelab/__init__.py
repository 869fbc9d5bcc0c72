"""Row sequences of Padé, Hermite-Padé and incomplete Padé approximants."""
__version__ = "0.1.0"

from .scalar import DEFAULT_DIGITS, Backend, QQi, set_precision

set_precision(DEFAULT_DIGITS)

__all__ = ["Backend", "QQi", "set_precision", "DEFAULT_DIGITS", "__version__"]
