"""Interactive grounded-language acquisition in a 2D gridworld."""

__version__ = "0.1.0"
