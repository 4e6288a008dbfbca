"""Exact symbolic calculus for Chern-Simons, transgression and gauged
Wess-Zumino-Witten forms over Poincare-type Lie algebras, with an independent
rational jet oracle."""

from .algebra import (CosetSplit, GeneratorId, InvariantTensor, J, LieAlgebra,
                      P, build_ads, build_poincare, check_invariance,
                      check_jacobi, contract, invariant_tensor, lorentz_split)
from .coset import (CosetElement, compare_ads_series, dress,
                    dressed_curvature, maurer_cartan)
from .forms import (Atom, FormExpr, declare_symbol, ext_d, form_sum,
                    integrate_param, series_coefficients, series_in_m2, wedge,
                    wedge_power)
from .gravity import (DerivationReport, EpsWord, cs_gravity_lagrangian,
                      derive_cs_gravity, eps_contract, gwzw_reduce,
                      gwzw_reduce_3d, standard_fields,
                      topological_action_integrand)
from .homotopy import (Family, HomotopyReport, Word, cartan_check,
                       chern_simons, derivation_commutator_check,
                       gauge_cs_words, gauge_homotopy_form, homotopy_integral,
                       invariant_power_word, line_family, scaling_family,
                       transgression, triangle_form, triangle_split,
                       wz_coefficient, wz_coefficient_beta, wz_term,
                       wz_term_via_homotopy)
from .jets import (JetAssignment, OracleReport, assign_jets, check_identity,
                   evaluate)
from .lieform import (LieForm, bracket, coset_scalar, cov_d, curvature,
                      dress_adjoint, ext_d_lie, half_square, lie_zero,
                      spin_connection, trace, vielbein)
from .scalars import Scalar

__all__ = [name for name in dir() if not name.startswith("_")]
