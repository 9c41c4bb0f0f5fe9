"""anchorpack: exact-arithmetic anchored square packing toolkit."""

__version__ = "0.1.0"
