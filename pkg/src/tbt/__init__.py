"""Interactive gradient-boosted-tree workbench."""

__version__ = "0.1.0"
