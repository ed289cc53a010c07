"""Figure scripts for kfs output files."""

__version__ = "0.1.0"

from .figures import plot_heatmap, plot_lines, plot_wigner_panels
from .reader import SchemaError, load_field, load_sweep

__all__ = [
    "plot_wigner_panels",
    "plot_heatmap",
    "plot_lines",
    "load_field",
    "load_sweep",
    "SchemaError",
    "__version__",
]
