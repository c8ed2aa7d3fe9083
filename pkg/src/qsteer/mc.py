"""Backend selection for batched trajectory sampling.

The compiled kernel is used when the extension was built; otherwise the
pure-numpy fallback is selected at import time. Both produce bit-identical
results, so the choice only affects speed (see benchmarks/).
"""
from __future__ import annotations

try:
    from . import _mc_kernel as _impl

    BACKEND = "cython"
except ImportError:
    from . import _mc_numpy as _impl

    BACKEND = "numpy"

simulate_batch = _impl.simulate_batch


def available_backends() -> dict:
    """Map backend name -> simulate_batch callable for every importable one."""
    backends = {}
    try:
        from . import _mc_kernel

        backends["cython"] = _mc_kernel.simulate_batch
    except ImportError:
        pass
    from . import _mc_numpy

    backends["numpy"] = _mc_numpy.simulate_batch
    return backends
