"""Coronary-calcium radiomics: volume io, feature extraction, selection, models, CLI."""

__version__ = "0.1.0"
