"""Exact first-order statistics over finite relational structures."""

try:
    from ._fostat import *  # noqa: F401,F403
    from ._fostat import __doc__  # noqa: F401
except ImportError:  # extension built out of tree, e.g. in the cmake build dir
    from _fostat import *  # noqa: F401,F403
