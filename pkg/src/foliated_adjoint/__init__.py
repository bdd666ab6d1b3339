"""Exact adjoint-divisor toolkit for foliated surfaces."""
