"""
Test suite for the unidist decision engine

- Unit tests: one engine module at a time
- Integration tests: the command line and its exit codes
- E2E tests: JSON documents on disk through the command line
- Performance tests: the exhaustive sweeps at larger sizes
"""
