"""superefficiency-lab: numerical laboratory for superefficiency theory."""

__version__ = "0.1.0"
