"""GMI-based geometric constellation shaping."""
__version__ = "0.1.0"
