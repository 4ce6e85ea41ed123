"""Integration tests for the unidist command line"""
