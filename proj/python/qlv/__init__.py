"""Las Vegas query complexity toolkit: python bindings over the C++ core."""

try:
    from ._qlv import *  # noqa: F401,F403  (installed wheel layout)
    from ._qlv import __doc__ as _doc
except ImportError:  # pragma: no cover - in-tree builds put _qlv on sys.path
    from _qlv import *  # noqa: F401,F403
    from _qlv import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
