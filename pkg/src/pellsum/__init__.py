"""Certified replay of the finiteness proof for P_n + P_m + P_l = 2^a."""

__version__ = "0.1.0"
