"""Exact computations for cones of divisors on K3-fibred blowups."""
