"""Exact computations with endoscopic data, Levi transfer and Kottwitz sets."""

from .builtins import builtin_datum, builtin_form, gl, gunitary, pgl, sl, so, sp, torus, trivial_action, unitary
from .endoscopy import (
    EndoTriple,
    SSPair,
    canonical_representative,
    class_key,
    enumerate_elliptic,
    enumerate_triples,
    is_elliptic,
    is_isomorphic,
    out_group,
    ss_pair_to_triple,
    triple_from_element,
    trivial_triple,
)
from .galois import GaloisForm, gamma_average, relative_roots, split_form, stable_subsets, validate_form
from .kottwitz import (
    EndoCochainSum,
    EndoCochar,
    EndoContext,
    KottwitzPoint,
    kottwitz_set,
    m_sum,
    verify_induction,
    verify_sum_formula,
)
from .lattice import LatAut, LatVec, RatVec, TorsionVec
from .levi import (
    EmbeddedDatum,
    eff_filter,
    fiber,
    inner_class_count,
    is_acceptable,
    restricts,
    x_map,
    y_map,
)
from .report import ClassId, canonicalize, render
from .rootdatum import BasedRootDatum, RootDatum, WeylElt, dual, standard_levi, validate, weyl_group
from .specfile import SpecError, parse_spec

__version__ = "0.1.0"
