"""lz77em - external-memory LZ77 decoding under explicit RAM and disk budgets."""

__version__ = "0.1.0"
