"""genfunc - grid-sampled Colombeau generalized functions, growth scales and wavefronts."""

__version__ = "0.1.0"
