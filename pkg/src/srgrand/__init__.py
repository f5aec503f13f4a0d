"""Noise-guessing decoders with symbol reliability information."""
