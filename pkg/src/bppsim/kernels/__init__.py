"""Kernel backend selection: compiled extension if available, numpy fallback
otherwise.  Set BPPSIM_PURE_PYTHON=1 to force the fallback."""
import os

if os.environ.get("BPPSIM_PURE_PYTHON"):
    from bppsim.kernels import _py as _impl
else:
    try:
        from bppsim.kernels import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        from bppsim.kernels import _py as _impl

BACKEND = _impl.BACKEND
config_energies = _impl.config_energies
glauber_chain = _impl.glauber_chain


def get_backend(name):
    """Return a specific backend module ('python' or 'cython') for benchmarks."""
    if name == "python":
        from bppsim.kernels import _py
        return _py
    if name == "cython":
        from bppsim.kernels import _core
        return _core
    raise ValueError(f"unknown backend {name!r}")
