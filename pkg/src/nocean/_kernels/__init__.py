"""Kernel backend selection.

The compiled Cython core is preferred when importable; the NumPy backend is
the fallback. NOCEAN_BACKEND=numpy forces the fallback, NOCEAN_BACKEND=compiled
makes a missing extension an error (useful in CI for the parity tests).
"""

import os

_requested = os.environ.get("NOCEAN_BACKEND", "auto")

if _requested not in ("auto", "compiled", "numpy"):
    raise ValueError(f"NOCEAN_BACKEND must be auto|compiled|numpy, got {_requested!r}")

if _requested == "numpy":
    from . import numpy_backend as impl

    BACKEND = "numpy"
else:
    try:
        from . import _core as impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import numpy_backend as impl  # type: ignore[no-redef]

        BACKEND = "numpy"

avg_v_to_u = impl.avg_v_to_u
avg_u_to_v = impl.avg_u_to_v
avg_c_to_u = impl.avg_c_to_u
avg_c_to_v = impl.avg_c_to_v
avg_u_to_c = impl.avg_u_to_c
avg_v_to_c = impl.avg_v_to_c
avg_vertex_to_u = impl.avg_vertex_to_u
avg_vertex_to_v = impl.avg_vertex_to_v
grad_x = impl.grad_x
grad_y = impl.grad_y
div = impl.div
vorticity = impl.vorticity
ke_centers = impl.ke_centers
upwind_to_u = impl.upwind_to_u
upwind_to_v = impl.upwind_to_v
laplace_u = impl.laplace_u
laplace_c = impl.laplace_c
flood_fill = impl.flood_fill
