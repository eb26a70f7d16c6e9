"""Weighted-random-walk approximation to fractional Brownian motion."""

try:
    from ._fbmwalk import *  # noqa: F401,F403
    from ._fbmwalk import __version__  # noqa: F401
except ImportError:  # running against a bare build tree
    from _fbmwalk import *  # noqa: F401,F403
    from _fbmwalk import __version__  # noqa: F401
