"""Unit tests for the unidist engine modules"""
