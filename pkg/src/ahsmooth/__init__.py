"""Polyhedral divisors and smoothness checks for Gm-actions on affine threefolds."""
