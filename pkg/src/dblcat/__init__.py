"""Double categories of spans and polynomials over finite sets, with
free monad constructions and a brute-force law checker."""

__version__ = "0.1.0"
