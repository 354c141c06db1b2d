"""Design grids and banded linear algebra."""

from .design import DesignGrid, locate, locate_many
from .banded import (
    BandedCholesky,
    BandedMatrix,
    banded_lu_solve,
    banded_solve,
    condition_number,
)

__all__ = [
    'DesignGrid',
    'locate',
    'locate_many',
    'BandedCholesky',
    'BandedMatrix',
    'banded_lu_solve',
    'banded_solve',
    'condition_number',
]
