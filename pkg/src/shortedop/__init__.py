"""Shorted-operator calculus for Hermitian PSD block matrices."""
