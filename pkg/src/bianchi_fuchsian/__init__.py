"""Maximal Fuchsian subgroups of PSL(2, Z[sqrt(-2)]): circle forms, quaternion
orders, covolumes and the counting of totally geodesic surfaces by area."""

from .circles import ReducedForm, family_form, n2, reduce_form
from .covolume import CovolumeResult, F, covolume_closed, covolume_local
from .exact_arith import QInt, QRat, Mat2, RationalLattice, hnf
from .orders import ZOrder, derive_order, theorem1_order
from .quaternion import Quaternion

__all__ = [
    "CovolumeResult", "F", "Mat2", "QInt", "QRat", "Quaternion", "RationalLattice",
    "ReducedForm", "ZOrder", "covolume_closed", "covolume_local", "derive_order",
    "family_form", "hnf", "n2", "reduce_form", "theorem1_order",
]
__version__ = "0.1.0"
