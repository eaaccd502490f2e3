"""Cop-side strategies."""
