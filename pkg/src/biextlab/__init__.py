"""Exact computations with Picard stacks over the punctual site."""
