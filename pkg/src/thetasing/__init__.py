"""Theta divisors with singularities: theta jets, singular points, Pfaffian quadrics and class calculus."""

__version__ = "0.1.0"
