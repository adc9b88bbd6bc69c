"""Static figure rendering for solsta scenario artifacts.

Pure post-processing: every image is a deterministic function of the CSV
content; no physics is recomputed here.
"""

from .spec import FigureSpec, RenderError
from .render import render, specs_for_run

__all__ = ["FigureSpec", "RenderError", "render", "specs_for_run"]
__version__ = "0.1.0"
