"""Grassmann-valued symbolic computation for the supersymmetric minimal surface equation."""
