"""Exact engine for spherical objects and commuting twists over zigzag models."""

try:
    from ._twistlab import *  # noqa: F401,F403  (installed layout)
    from ._twistlab import __version__  # noqa: F401
except ImportError:  # build-tree layout: module next to the package on sys.path
    from _twistlab import *  # noqa: F401,F403
    from _twistlab import __version__  # noqa: F401
