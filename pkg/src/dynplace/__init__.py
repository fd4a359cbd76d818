"""Round-based simulator for dynamic server placement on substrate networks."""

__version__ = "0.1.0"
