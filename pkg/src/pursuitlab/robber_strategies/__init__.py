"""Robber-side strategies."""
