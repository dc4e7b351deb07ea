"""nct: finite strict n-categories, Θ_n, nerves and locality checks."""

__version__ = "0.1.0"
