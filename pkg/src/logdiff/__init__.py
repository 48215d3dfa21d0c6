"""Numerical laboratory for the logarithmic diffusion equation near extinction."""
