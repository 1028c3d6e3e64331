"""Hot loops over GF(p): polynomial tables, value histograms, quadruple counts.

The compiled extension is used when it imports; otherwise the numpy
implementation is selected.  Setting ``EXPANDERLAB_PURE=1`` forces the
fallback.
"""

import os

from . import _pykernels as py

BACKEND = "python"
_impl = py

if os.environ.get("EXPANDERLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _c
    except ImportError:
        _c = None
    if _c is not None:
        _impl = _c
        BACKEND = "cython"

# Compiled code keeps residues in uint64 with 128-bit products.
poly_table = _impl.poly_table
value_counts = _impl.value_counts
poly_points = _impl.poly_points
univariate_values = _impl.univariate_values
quadruple_distinct = _impl.quadruple_distinct


def backends():
    """Available kernel modules by name (the fallback is always present)."""
    out = {"python": py}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
