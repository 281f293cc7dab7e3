"""Hot pair-loop kernels with a numba fast path and a pure-numpy fallback.

Backend selection, checked once at import:

  LJQUANTUM_KERNELS=numba   force numba (ImportError if unavailable)
  LJQUANTUM_KERNELS=numpy   force the vectorized numpy fallback
  unset                     numba when importable, else numpy

Both backends implement the same five functions with identical semantics;
`python -m ljquantum.benchmark` times one against the other.
"""

from __future__ import annotations

import os

_requested = os.environ.get("LJQUANTUM_KERNELS", "").strip().lower()

if _requested == "numpy":
    from . import _numpy as _impl

    BACKEND = "numpy"
elif _requested == "numba":
    from . import _numba as _impl

    BACKEND = "numba"
elif _requested == "":
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _numpy as _impl

        BACKEND = "numpy"
else:
    raise ValueError(
        f"LJQUANTUM_KERNELS={_requested!r} not understood; use 'numba' or 'numpy'"
    )

total_potential = _impl.total_potential
pair_observables = _impl.pair_observables
hessian_quadratic_form = _impl.hessian_quadratic_form
sample_config = _impl.sample_config
build_pair_energy_cache = _impl.build_pair_energy_cache
metropolis_sweeps = _impl.metropolis_sweeps
pair_distance_histogram = _impl.pair_distance_histogram


def backend_name() -> str:
    return BACKEND
