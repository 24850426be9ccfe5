"""lz77em tests."""
