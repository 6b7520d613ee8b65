"""Backend selection for the hot computational kernels.

Imports the compiled extension when present, falling back to the pure
Python twins.  Set LKWB_NO_SPEEDUPS=1 to force the pure backend (used by
the benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("LKWB_NO_SPEEDUPS"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
PACK = _impl.PACK
pack_exp = _impl.pack_exp
unpack_exp = _impl.unpack_exp
terms_mul = _impl.terms_mul
terms_add = _impl.terms_add
terms_scale = _impl.terms_scale
poly_mul_int = _impl.poly_mul_int
poly_divexact_int = _impl.poly_divexact_int
poly_eval_int = _impl.poly_eval_int
poly_content_int = _impl.poly_content_int
poly_gcd_int = _impl.poly_gcd_int
bareiss_det_int = _impl.bareiss_det_int
bareiss_det_polyint = _impl.bareiss_det_polyint
