"""End-to-end tests for unidist workflows"""
