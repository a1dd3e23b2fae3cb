"""Exact computational Lie theory and controllability certificates."""

__version__ = "0.1.0"

from .rootsys import DynkinType, RootSystem, root_system  # noqa: E402
from .chevalley import LieAlgebra, build_algebra  # noqa: E402
from .elements import AlgebraElement, CartanVector  # noqa: E402
from .controllability import Certificate, SystemSpec, decide  # noqa: E402

__all__ = [
    "DynkinType", "RootSystem", "root_system", "LieAlgebra", "build_algebra",
    "AlgebraElement", "CartanVector", "SystemSpec", "Certificate", "decide",
]
