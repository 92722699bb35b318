"""Vietoris-Rips persistent homology on exact squared distances."""
from .filtration import (Filtration, FiltrationOrderError, FiltrationTooLarge, Simplex,
                         UnsupportedDimension, build_filtration, enclosing_radius,
                         enclosing_radius_squared)
from .oracle import OracleTooLarge, betti_oracle, oracle_ranks
from .reduction import Bar, Barcode, betti_at, betti_at_squared, exact_square, reduce, render


def barcode_of(m, threshold=None, max_dim: int = 3, max_simplices=None) -> Barcode:
    """build_filtration followed by reduce."""
    return reduce(build_filtration(m, max_dim, threshold, max_simplices))


__all__ = ["Bar", "Barcode", "Filtration", "FiltrationOrderError", "FiltrationTooLarge",
           "OracleTooLarge", "Simplex", "UnsupportedDimension", "barcode_of", "betti_at",
           "betti_at_squared", "betti_oracle", "build_filtration", "enclosing_radius",
           "enclosing_radius_squared", "exact_square", "oracle_ranks", "reduce", "render"]
