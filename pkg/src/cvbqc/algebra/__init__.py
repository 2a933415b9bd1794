"""Symbolic calculus for CV gate words."""

from .params import (
    E_LINEAR,
    P_QUADRATURE,
    ObservablePoly,
    ParamVector,
    PhasePoly,
    apply_mm,
    apply_mm_inverse,
    conjugate_p_by_phase_gate,
    mm_inverse,
    mm_matrix,
    push_x_through_rq,
)
from .rewrite import (
    ByproductFrame,
    canonicalize_core,
    normalize,
    push_byproduct_through_cz,
    word_equal_up_to_byproduct,
)
from .symplectic import SymplecticRep, atom_rep, symplectic_form, to_symplectic
from .words import (
    ControlledX,
    ControlledZ,
    Fourier,
    GateWord,
    PhaseP,
    PhaseQ,
    Squeeze,
    Xdisp,
    Zdisp,
    format_word,
    parse_word,
    word,
)
