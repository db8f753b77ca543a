"""Bracket tables of the symmetry algebras of the three field configurations."""
from operators.checks import StructureConstants

ROTATIONS = StructureConstants(
    ["X1", "X2", "X3"],
    {("X1", "X2"): {"X3": 1}, ("X3", "X1"): {"X2": 1}, ("X2", "X3"): {"X1": 1}},
)


def central_extension(field_strength):
    """e(2) extended by the central element X0 ([X1, X2] = H X0)."""
    return StructureConstants(
        ["X0", "X1", "X2", "X3"],
        {
            ("X1", "X3"): {"X2": -1},
            ("X2", "X3"): {"X1": 1},
            ("X1", "X2"): {"X0": field_strength},
        },
    )


# As printed for the crossed-field free algebra
CROSSED = StructureConstants(
    ["X1", "X2", "X3", "X4"],
    {("X1", "X2"): {"X1": 1}, ("X1", "X4"): {"X3": -1}, ("X2", "X3"): {"X3": -1}},
)

# What the differential operators L21 + L24 + spin, L14 + spin, d_t + d_z, d_x + eps d_y close on
CROSSED_OPERATORS = StructureConstants(
    ["X1", "X2", "X3", "X4"],
    {("X1", "X2"): {"X1": 1}, ("X1", "X4"): {"X3": 1}, ("X2", "X3"): {"X3": -1}},
)
