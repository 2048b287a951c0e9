"""Static PNG renderings of eulerspin CSV outputs."""

from .render import KINDS, render

__version__ = "0.1.0"
