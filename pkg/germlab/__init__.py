"""Classification of degenerate critical points of smooth and even function germs."""

__version__ = "0.1.0"
