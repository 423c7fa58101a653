"""Kernel backend selection.

The hot inner loops (batch table-driven matrix products, permutation
composition, pair products, encodings) exist twice: numba ``@njit`` kernels
and pure-numpy fallbacks.  The environment variable ``SYLOWKIT_BACKEND``
picks one:

    SYLOWKIT_BACKEND=numba   force numba (ImportError if unavailable)
    SYLOWKIT_BACKEND=numpy   force the pure-numpy path
    unset                    numba if importable, else numpy

``benchmarks/bench_backends.py`` compares the two.
"""

import os

_requested = os.environ.get("SYLOWKIT_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"SYLOWKIT_BACKEND={_requested!r} not recognized (use 'numba' or 'numpy')"
    )

if _requested == "numpy":
    from . import numpy_impl as _impl

    BACKEND = "numpy"
elif _requested == "numba":
    from . import numba_impl as _impl

    BACKEND = "numba"
else:
    try:
        from . import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        from . import numpy_impl as _impl

        BACKEND = "numpy"

matmul_table = _impl.matmul_table
entrywise_table = _impl.entrywise_table
compose_perms = _impl.compose_perms
pair_mul = _impl.pair_mul
encode_base = _impl.encode_base
det_table = _impl.det_table
