"""Dual evaluation of multi-character Menon-Sury gcd sums."""
