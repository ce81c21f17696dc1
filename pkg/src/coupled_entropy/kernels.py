"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module takes over. Set ``COUPLED_ENTROPY_PURE_PYTHON=1`` to force the
fallback (handy for parity checks and benchmarks).
"""
import os

from . import _pykernels

if os.environ.get("COUPLED_ENTROPY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

phi0 = _impl.phi0
phi0_deriv = _impl.phi0_deriv
phi0_inverse = _impl.phi0_inverse
kasner_angle = _impl.kasner_angle
kasner_derivative = _impl.kasner_derivative
kasner_angle_array = _impl.kasner_angle_array
kasner_derivative_array = _impl.kasner_derivative_array
power_iterate = _impl.power_iterate


def available_backends():
    """Names and modules of every backend importable in this environment."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["compiled"] = _ckernels
    except ImportError:
        pass
    return out
