"""Minor 5-stars in plane graphs with minimum degree five."""

__version__ = "0.1.0"
