"""Photon Splitter - two-photon splitting through a 1D atom and a tunable interferometer."""

__version__ = "0.1.0"
