# Permutative-category constructions on Segal functors
from .segal import TruncatedSegalFunctor, FactFunctor, fact_functor, check_segal, check_functoriality
from .twisted import TwFunctor, f_tw, check_tw_functoriality, check_tw_monoidal, segal_comparison_tw
from .grothendieck import GrothendieckTotal, grothendieck, check_grothendieck, is_cartesian
from .perm import PermCategory, PermObject, perm_build, unit_inclusion
from .counit import counit_functor, check_counit
from .eta import OplaxTransformation, eta, identity_oplax, check_oplax, path_of_oplax, alpha_beta_check
