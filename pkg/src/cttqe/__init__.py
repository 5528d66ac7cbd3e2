"""A typed lambda calculus with quotation of syntax and typed evaluation."""

__version__ = "0.1.0"
