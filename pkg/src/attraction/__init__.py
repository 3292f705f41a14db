"""Release-timing games where films split each slot's audience by popularity."""

__version__ = "0.1.0"
