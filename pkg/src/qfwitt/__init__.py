"""Witt decomposition of quadratic forms over Q and quadratic number fields."""

from .aniso import anisotropic_part, binary_part, reduce_adim3, reduce_high
from .class_group import class_group, fundamental_unit, is_principal, s_class_group, singular_group_basis
from .field_core import FieldElt, NumberField, format_element, is_global_square, make_field, sign_at
from .ideals import PrimeIdeal, crt, factor_principal, ord_at, parse_prime, primes_above
from .local_invariants import hasse, hilbert, is_local_square, local_adim
from .signs import ordering_separation, positive_approximation, strong_ordering_separation
from .witt import DiagonalForm, adim, certificate, disc, forms_equivalent, witt_index

__version__ = "0.1.0"

__all__ = [
    "DiagonalForm",
    "FieldElt",
    "NumberField",
    "PrimeIdeal",
    "adim",
    "anisotropic_part",
    "binary_part",
    "certificate",
    "class_group",
    "crt",
    "disc",
    "factor_principal",
    "format_element",
    "forms_equivalent",
    "fundamental_unit",
    "hasse",
    "hilbert",
    "is_global_square",
    "is_local_square",
    "is_principal",
    "local_adim",
    "make_field",
    "ord_at",
    "ordering_separation",
    "parse_prime",
    "positive_approximation",
    "primes_above",
    "reduce_adim3",
    "reduce_high",
    "s_class_group",
    "sign_at",
    "singular_group_basis",
    "strong_ordering_separation",
    "witt_index",
]
