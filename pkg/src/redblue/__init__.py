"""Red/Blue cyber campaign wargame and playbook-driven decision support."""

__version__ = "0.1.0"
