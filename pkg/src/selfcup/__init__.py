"""Self cup products, the group UM, and theta characteristics of hyperelliptic curves.

Exact finite-group cohomology over Z/m (m in 2, 3, 4, 5) on the normalized
bar resolution.
"""

__version__ = "0.1.0"

from .perm_group import Perm, PermGroup, group_closure, cyclic_subgroup_reps, parse_generators, symmetric_group
from .gmodule import GModule, make_module, trivial_module, permutation_module, dual, hom_module, tensor_square
from .cohomology import Cochain, CohClass, cohomology_space, cup11, connecting1, cohomologous2, torsor_class
from .u_construction import UElement, u_mul, u_inv, section_s, u_connecting, selfcup_check, BilinearForm
from .u_construction import obstruction_class, quadratic_refinement
from .central_extension import CentralExt, make_central_ext, commutator_pairing, nonabelian_connecting
from .theta_model import build_theta, theta_class, weil_pairing, local_report, jacobian_identity_check
from .galois_frobenius import discriminant, ddf_cycle_type, certify_symmetric, frobenius_scan
