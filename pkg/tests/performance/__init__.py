"""Performance tests for the unidist sweeps"""
