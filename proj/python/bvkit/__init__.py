"""Multivariate bounded-variation machinery on dyadic grids."""

try:
    from ._bvkit import *  # noqa: F401,F403
    from ._bvkit import __doc__ as _doc
except ImportError:  # build-tree layout: extension next to the package
    from _bvkit import *  # noqa: F401,F403
    from _bvkit import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
