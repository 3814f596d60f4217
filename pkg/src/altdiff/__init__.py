"""Binary bi-braces, alternating algebras over GF(2), and the differential
analysis of toy SPN ciphers under alternative difference operations."""

from .algebra import (
    AlgebraSpec,
    InvalidAlgebraError,
    ParallelAlgebra,
    ThetaMatrix,
    algebra_from_text,
    algebra_to_text,
    annihilator_basis,
    key_addition_difference,
    parallel_extend,
    product_image,
    r_squared_basis,
    socle_basis,
    spec_from_theta,
    theta_from_spec,
    unidim_data,
    validate,
)
from .autos import (
    BlockAut,
    DirectSumAut,
    SympWitness,
    are_isomorphic,
    aut_group_unidim,
    dsum_aut_construct,
    dsum_aut_membership,
    enumerate_aut_bruteforce,
    is_automorphism,
    is_self_equivalence,
    iso_unidim,
    sample_automorphism,
    sp_membership,
    standardize_basis,
)
from .axioms import validate_axioms
from .difflab import (
    DDT,
    AttackResult,
    Trail,
    TrapdoorReport,
    ddt,
    distinguisher,
    key_addition_factor,
    last_round_key_recovery,
    max_bias,
    trail_search,
    trapdoor_pipeline,
)
from .gf2 import (
    BitMat,
    BitVec,
    MatSpace,
    SingularMatrixError,
    congruence_apply,
    hconcat_rank,
    is_skew_symmetric,
    mat_inverse,
    mat_rank,
    matrix_from_text,
    matrix_to_text,
    solve_left,
    symplectic_reduce,
)
from .spn import CipherSpec, SBox, cipher_from_text, cipher_to_text, decrypt, encrypt, validate_cipher

__version__ = "0.1.0"
