//! Exact computation with symmetric Macdonald polynomials at t = q^k.
//!
//! Everything is done over the field Q(q) with q a formal variable and the
//! second Macdonald parameter specialized to t = q^k for a positive integer k.
//! The crate provides:
//!
//! - exact scalars ([`qfield`]): rationals, polynomials in q, and reduced
//!   rational functions in q,
//! - integer partitions with dominance order and the hook-type product
//!   constants attached to them ([`partitions`]),
//! - sparse symmetric Laurent polynomials, the weight function Delta, and the
//!   constant-term inner product ([`symlaurent`]),
//! - the Macdonald basis itself via Gram-Schmidt against dominance order,
//!   with orthogonality, norm, and Cauchy-kernel checks ([`macdonald`]),
//! - residue-sum identities that reduce the constant-term norm integral to a
//!   finite sum over shifted evaluation points ([`residues`]).

pub mod macdonald;
pub mod partitions;
pub mod qfield;
pub mod residues;
pub mod symlaurent;

pub use macdonald::{
    macdonald_p, macdonald_p_lex_extension, monomial_expansion, norm_via_ct, verify_cauchy,
    verify_orthogonality, CauchyReport, MacdonaldBasis, OrthogonalityReport,
    CACHE_FORMAT_VERSION,
};
pub use partitions::{
    arm_leg, b_lambda_armleg, b_lambda_product, cells, dominance_comparable, dominance_leq,
    dominance_lt, enumerate_partitions, norm_formula, norm_formula_poch, Cell, Partition,
};
pub use qfield::{gauss_binomial, pochhammer, pochhammer_q, BigRat, QFieldError, QPoly, QRat};
pub use residues::{
    genericity_check, iterated_residue, iterated_residue_by_series, residue_31,
    residue_31_by_series, residue_sum_33, residue_sum_33_sigma, single_var_residue_sum,
    verify_31, verify_33, verify_lemma_n1, verify_residue_sums, Eq31Report, Eq33Report,
    Eq33Sample, LemmaN1Report, ResidueError, ResiduePoint, ResidueSumReport, YSample,
};
pub use symlaurent::{
    delta_weight, inner_product, inner_product_with_delta, kernel_denominator, kernel_truncated,
    monomial_symmetric, BiSeries, ExpVec, LaurentPoly,
};
