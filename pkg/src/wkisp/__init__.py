"""Inverse scattering, soliton construction and long-time asymptotics for the
Wadati-Konno-Ichikawa / short-pulse equation."""

__version__ = "0.1.0"
