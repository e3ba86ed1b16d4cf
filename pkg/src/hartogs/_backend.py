"""Pick the compiled kernels when available.

Set ``HARTOGS_BACKEND=python`` to force the numpy fallback, or
``HARTOGS_BACKEND=cython`` to fail loudly if the extension is missing.
"""
import os

from . import _pykernels

python = _pykernels

try:
    from . import _ckernels as cython
except ImportError:
    cython = None

_choice = os.environ.get("HARTOGS_BACKEND", "auto").lower()
if _choice == "python":
    active = python
elif _choice == "cython":
    if cython is None:
        raise ImportError("HARTOGS_BACKEND=cython but the _ckernels extension is not built")
    active = cython
else:
    active = cython if cython is not None else python

hartogs_kernel = active.hartogs_kernel
shell_sum = active.shell_sum
NAME = active.NAME
