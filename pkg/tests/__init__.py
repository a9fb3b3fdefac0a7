"""Photon Splitter test suite."""
