"""Primitive pairs (a, f(a)) over finite fields.

Decides and certifies, for degree bounds (m1, m2) and a prime p, which
exponents k admit a primitive pair (alpha, f(alpha)) for every admissible
rational function f over GF(p^k): exact criteria with machine-checkable
certificates, character-sum cross-checks, and an exhaustive certifier for
small fields.
"""

from .arith import (
    CapacityError,
    Factorization,
    euler_phi,
    factorize,
    is_prime,
    moebius,
    omega_and_w,
    primes_below,
    squarefree_divisors,
    theta,
)
from .certify import (
    CertifyResult,
    build_nogamma_witness,
    certify_k,
    count_upsilon,
    enumerate_upsilon,
    verify_counterexample,
)
from .criteria import (
    ClassifyOptions,
    SieveCertificate,
    Verdict,
    check_corollary,
    check_cota_t,
    check_mersenne,
    check_no_gamma,
    check_phi_density,
    classify,
    gamma_table,
    sieve_certificate,
    sieve_search,
)
from .ff import FieldContext, build_field
from .pairs import (
    CharacterIndex,
    FreePairCount,
    character_sum,
    characters_of_order,
    count_free_pairs,
    n_f_via_characters,
    nf_lower_bound,
    rho_s,
    sieve_inequality_check,
)
from .polyff import (
    PolyQ,
    RationalFunction,
    factor_poly,
    in_upsilon,
    lambda_nonempty,
    monic_irreducibles,
    poly,
    poly_eval,
    poly_gcd,
    rational,
)

__version__ = "0.1.0"
