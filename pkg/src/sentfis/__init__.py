"""Lexicon sentiment scoring refined by root transforms and fused by a Mamdani FIS."""

__version__ = "0.1.0"
