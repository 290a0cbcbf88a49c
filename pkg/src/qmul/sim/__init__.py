"""Dense state-vector simulator.

Gate kernels come from the compiled ``_kernels`` extension when it is
built, otherwise from the numpy ``_fallback`` module. Set
``QMUL_BACKEND=python`` to force the fallback.
"""
from .statevector import (
    active_backend,
    DEFAULT_DENSE_LIMIT,
    ReadoutResult,
    StateVector,
    apply,
    apply_phase,
    dense_limit,
    from_amplitudes,
    init_basis,
    marginal,
    readout,
    run,
    use_backend,
)

__all__ = [
    "active_backend",
    "DEFAULT_DENSE_LIMIT",
    "ReadoutResult",
    "StateVector",
    "apply",
    "apply_phase",
    "dense_limit",
    "from_amplitudes",
    "init_basis",
    "marginal",
    "readout",
    "run",
    "use_backend",
]
