"""Hypergeometric functions over finite fields, their p-adic extension, and
verification of their relations to modular-form Fourier coefficients."""

from .charsums import GaussTable, gauss_table, jacobi_sum
from .cyclotomic import ComplexValue, CyclotomicInteger, embed_complex, round_to_integer
from .elliptic import EllipticCurve, ec_ap, j_invariant
from .engine import EngineOptions, Report, check_relation, run_suite
from .errors import HgffError
from .etaproducts import EtaProduct, eta_expansion
from .fields import (
    Field,
    FieldElement,
    MultChar,
    canonical_char,
    char_eval,
    make_field,
    quadratic_char,
    trace_to_prime,
    trivial_char,
)
from .hypff import (
    HypParams,
    eval_F,
    eval_F_integer,
    greene_conversion_factor,
    params_from_labels,
)
from .newforms import Newform, coeff_embedded, fetch_newform, load_label, load_newform
from .padic import (
    GParams,
    PadicResidue,
    eval_G,
    lift_symmetric,
    padic_gamma,
    precision_for_weight,
    teichmuller,
)
from .relations import RelationSpec, registry
from .signs import SignKind, SignValue, kronecker, quinary, sign, two_square, u2v2
from .traceform import (
    c_coeff,
    delta,
    g_poly,
    r_poly,
    tau_via_hypergeometric,
    trace_gamma0_2,
)

__version__ = "0.1.0"
