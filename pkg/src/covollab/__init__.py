"""Exact computations for lattices in Chevalley groups over F_q((t^-1))."""

from .chevorder import exponents, group_order, ring_group_order
from .covolume import (ZetaPolynomial, bound_audits, covol_genus, covol_rational, euler_enclosure,
                       index_lower_bound, validate_zeta)
from .rootsys import RootSystemType, build_root_system, root_system

__version__ = "0.1.0"
