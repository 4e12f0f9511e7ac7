"""Cyclically presented groups, their finite quotients, and residual-finiteness
evidence for ascending HNN extensions of free groups."""

from .words import Endomorphism, Word, format_word, parse_endomorphism, parse_word
from .present import (
    CyclicWordFamily,
    FreeByCyclicData,
    Presentation,
    cyclic_presentation,
    free_by_cyclic_check,
    h_n_presentation,
    v_to_w,
)
from .intpoly import IntPolynomial, associated_polynomial, classify_cyclotomic_type, resultant
from .abelian import AbelianGroupStructure, IntMatrix, abelianization, smith_normal_form
from .permgrp import Permutation, PermGroup, embed_in_alternating, group_from_name
from .homsearch import BudgetExceeded, Homomorphism, enumerate_homs, find_surjection, scan_quotients
from .covers import simple_quotient_schedule
from .rescert import (
    FiniteIndexSubgroup,
    RFCertificate,
    TruncatedSeries,
    magnus_expand,
    pullback_orbit,
    rf_certificate,
)

__version__ = "0.1.0"
