"""Kernel backend selection.

The compiled extension is preferred; the numpy twin is the fallback. Both
expose the same six functions, re-exported here as module attributes so that
callers always go through ``_backend.<name>``.
"""

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

_EXPORTS = (
    "jacobi_svd",
    "singular_values",
    "schatten_pp",
    "schatten_pp_batch",
    "profile_pp",
    "profile_pp_batch",
    "profile_pp_packed",
)

NAME = None


def available():
    """Names of the backends importable in this environment."""
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def set_backend(name):
    """Switch every kernel entry point to backend ``name`` ("compiled" or "python")."""
    global NAME
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernel is not built; run `pip install -e .`")
        module = _compiled
    elif name == "python":
        module = _kernel_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    for attr in _EXPORTS:
        globals()[attr] = getattr(module, attr)
    NAME = name


set_backend(available()[0])
