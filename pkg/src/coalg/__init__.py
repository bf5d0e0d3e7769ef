"""Coalgebraic bisimulation on finite sets."""
from .errors import (CoalgError, DomainError, ParseError, ShapeError, SizeError,
                     ValidationError)
from .finset import (Cospan, FinFunction, FinSet, Relation, equivalence_closure,
                     image_factorization, pullback, pushout, relation_leq)
from .functors import (AtMostTwoOfThree, Coalgebra, Compose, Constant, Coproduct,
                       FinPowerset, Identity, Inj, LabelledTransitions, Power,
                       Product, SubDist, SubDistribution, eval_morphism,
                       eval_object, lifting_witness, relation_lifting)
from .syntax import format_functor, format_value, parse_functor, parse_value
from .bisim import (CoalgebraPair, behavioural_equivalence_equal_legs,
                    classify_relation, is_am_bisimulation, is_am_precongruence,
                    is_hj_bisimulation, is_kernel_bisimulation, phi_am, phi_hj)
from .sequences import (greatest_fixpoint, terminal_sequence,
                        terminal_sequence_relation)
from .lts import lts, lts_phi_direct, partition_refinement_lts
from .props import (KernelVariant, PropertyName, check_kernel_pair_variants,
                    check_property, mediating_map)

__version__ = "0.1.0"
