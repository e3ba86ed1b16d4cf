"""Bergman kernels and projections on generalized Hartogs triangles."""
