"""Scalar potential rules; every rule accepts plain numbers and jets."""
from django.core.exceptions import ValidationError


def zero_potential(x):
    return 0.0 * x


def constant_potential(value):
    def rule(x):
        return 0.0 * x + value

    rule.label = f"const:{value:g}"
    return rule


def linear_potential(slope, offset):
    def rule(x):
        return slope * x + offset

    rule.label = f"linear:{slope:g},{offset:g}"
    return rule


def coulomb_potential(zalpha):
    """eV(r) = -Z alpha / r."""

    def rule(r):
        return -zalpha / r

    rule.label = f"coulomb:{zalpha:g}"
    return rule


def parse_potential(text):
    """`const:<v>` or `linear:<a>,<b>`."""
    kind, _, values = text.partition(":")
    try:
        numbers = [float(v) for v in values.split(",")]
    except ValueError:
        raise ValidationError(f"Invalid potential '{text}'.")
    if kind == "const" and len(numbers) == 1:
        return constant_potential(numbers[0])
    if kind == "linear" and len(numbers) == 2:
        return linear_potential(*numbers)
    raise ValidationError(f"Invalid potential '{text}'; use const:<v> or linear:<a>,<b>.")
