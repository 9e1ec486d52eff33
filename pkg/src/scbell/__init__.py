"""Bell-inequality maxima for Schmidt-correlated two- and three-qubit states."""

__version__ = "0.1.0"
