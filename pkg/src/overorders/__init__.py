"""Overorders of orders in étale and semisimple Q-algebras."""

__version__ = "0.1.0"
