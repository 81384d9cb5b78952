"""Precomputed skyline diagrams: quadrant, global and dynamic."""
from .core import (ConsistencyError, Dataset, DimensionError, Point, SkydiagError, dominates,
                   dynamic_skyline, global_skyline, quadrant_skyline, skyline, skyline_layers,
                   build_dsg)
from .grid import (CellGrid, DiagramPartition, SubcellGrid, build_cell_grid, build_subcell_grid,
                   locate, representative)

__version__ = "0.1.0"
