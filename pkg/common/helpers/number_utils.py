import math
from decimal import Decimal

_INTEGRAL_TYPES = (bool, int)
INFINITY_TOKEN = 'inf'


def is_integral(obj):
    """Integers (and bools) are written bare, never with a decimal part."""
    return isinstance(obj, _INTEGRAL_TYPES)


def format_fixed(value, places: int) -> str:
    """
    Locale-independent fixed-point rendering. Goes through Decimal so the output
    never depends on the platform's float repr or the process locale.
    """
    if is_integral(value):
        return str(int(value))
    value = float(value)
    if math.isinf(value):
        return INFINITY_TOKEN if value > 0 else f'-{INFINITY_TOKEN}'
    if math.isnan(value):
        raise ValueError("NaN cannot be written to a metrics series")
    quantum = Decimal(1).scaleb(-places)
    rendered = Decimal(repr(value)).quantize(quantum)
    # Normalise negative zero so identical runs stay byte-identical.
    if rendered.is_zero():
        rendered = abs(rendered)
    return f'{rendered:f}'


def force_number_str(value, places: int = 6) -> str:
    """Render any metrics cell: strings pass through, numbers become fixed-point."""
    if issubclass(type(value), str):
        return value
    return format_fixed(value, places)
