"""Split-kernel backend selection.

The compiled extension is preferred when importable; the NumPy fallback is
bit-identical, just slower. Set TBT_KERNEL=python or TBT_KERNEL=compiled to
force one (forcing the compiled backend on a build without it raises).
"""

from __future__ import annotations

import os

_FORCED = os.environ.get("TBT_KERNEL", "").strip().lower()

if _FORCED in ("python", "py", "pure"):
    from . import _kernels_py as _impl
elif _FORCED in ("compiled", "c", "ext"):
    from . import _kernels as _impl  # type: ignore[no-redef]
elif _FORCED:
    raise ImportError(f"TBT_KERNEL={_FORCED!r}: expected 'python' or 'compiled'")
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
best_numeric_split = _impl.best_numeric_split
best_categorical_split = _impl.best_categorical_split


def available_backends() -> dict[str, object]:
    """Importable kernel modules keyed by backend name (for tests/benchmarks)."""
    from . import _kernels_py

    out: dict[str, object] = {_kernels_py.BACKEND: _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out[_kernels.BACKEND] = _kernels
    except ImportError:
        pass
    return out
