"""Collapsing term systems for coded dilators.

Core pieces: coded linear orders and combinators (orders), coded
predilators with traces and normal forms (dilators), the binary Veblen
term order (gamma), collapsing term systems and their defining range
equation (psi), and the constructive bridges between collapses
(morphisms).  The cli module exposes everything on the command line.
"""

from .orders import (
    CodedOrder,
    Embedding,
    combine_orders,
    finite_order,
    increasing_enumeration,
    kb_compare,
    nu_order,
    omega_order,
    word_order,
)
from .dilators import (
    AffineDilator,
    Elem,
    OmegaDilator,
    Predilator,
    Trace,
    apply_embedding,
    builtin_dilator,
    check_predilator_laws,
    compose,
    element_compare,
)
from .psi import Caps, CollapseHandle, PsiSystem, check_range_condition, psi_l_measure
from .morphisms import (
    bh_theta,
    bh_to_one_collapse,
    check_bh_collapse,
    initial_embedding,
    omega_one_collapse,
    sigma_plus,
)

__all__ = [name for name in dir() if not name.startswith("_")]
