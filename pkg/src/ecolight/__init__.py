"""Single-intersection signal-control benchmark with emission-weighted rewards."""

__version__ = "0.1.0"
