"""raceplots: figure rendering for development-race simulation outputs.

Consumes the simulator's CSV files (sweeps, zealot progressions, time
series, region boundaries) and renders the four figure families, writing a
deterministic sidecar file of plotted coordinates next to every image.
"""

__version__ = "0.1.0"

from .figures import (FigureSpec, render, render_heatmap, render_risk_scan,
                      render_timeseries, render_zealot_curve, sidecar_path)
from .io import PlotDataError
