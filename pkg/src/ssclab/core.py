"""Pick the compiled term core when it is available.

Set ``SSCLAB_PURE=1`` in the environment to force the interpreted core.
"""

import os

IMPLEMENTATION = "python"

if os.environ.get("SSCLAB_PURE", "") not in ("", "0"):
    from ._pycore import Term, Var, Lam, App, Sub, VAR, LAM, APP, SUB
    from ._pycore import free_vars, shallow_free_vars, term_size, alpha_key, term_equal
else:
    try:
        from ._ccore import Term, Var, Lam, App, Sub, VAR, LAM, APP, SUB
        from ._ccore import free_vars, shallow_free_vars, term_size, alpha_key, term_equal
        IMPLEMENTATION = "cython"
    except ImportError:
        from ._pycore import Term, Var, Lam, App, Sub, VAR, LAM, APP, SUB
        from ._pycore import free_vars, shallow_free_vars, term_size, alpha_key, term_equal

__all__ = [
    "Term", "Var", "Lam", "App", "Sub", "VAR", "LAM", "APP", "SUB",
    "free_vars", "shallow_free_vars", "term_size", "alpha_key", "term_equal",
    "IMPLEMENTATION",
]
