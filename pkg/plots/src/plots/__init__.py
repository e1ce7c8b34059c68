"""Post-processor that turns solver output directories into figures.

This package consumes only the solver's documented text formats (frame,
table, summary, convergence, scaling records); it never imports the
solver itself.
"""

from plots.io import PlotInputError, read_frame, read_records, read_table

__all__ = ["PlotInputError", "read_frame", "read_table", "read_records"]
