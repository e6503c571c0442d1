"""Double ramification graph invariants, coefficient tables and identity checks."""

__version__ = "0.1.0"
