"""Quantum channels acting on symplectic tomograms.

Typical use::

    from tomokraus import RayGrid, fock_state, tomogram_from_density, qubit_channel

    grid = RayGrid(8.0, 257, 64)
    t = tomogram_from_density(fock_state(1, 2), grid)
    out = qubit_channel("amplitude_damping", 0.3).channel().apply(t)
"""

from .basis import *  # noqa: F401,F403
from .basis import __all__ as _basis_all
from .channels import *  # noqa: F401,F403
from .channels import __all__ as _channels_all
from .errors import ConvergenceError, GeneralizedObjectError, TomoError, UsageError, ValidationError
from .kernels import *  # noqa: F401,F403
from .kernels import __all__ as _kernels_all
from .tomography import *  # noqa: F401,F403
from .tomography import __all__ as _tomography_all

__version__ = "0.1.0"

__all__ = [
    *_basis_all,
    *_tomography_all,
    *_kernels_all,
    *_channels_all,
    "TomoError",
    "UsageError",
    "ValidationError",
    "ConvergenceError",
    "GeneralizedObjectError",
]
