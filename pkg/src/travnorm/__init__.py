"""Normalization of untyped lambda terms by traversals."""
