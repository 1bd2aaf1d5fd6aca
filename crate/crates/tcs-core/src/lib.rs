//! Exact computation of minimum total coefficient size for refutations of
//! Boolean axiom systems.
//!
//! The total coefficient size of a refutation `1 = sum_W c_W * W` (where each
//! `W` is a monomial multiple of an axiom) is `sum_W |c_W|`. Everything here
//! is exact: monomials and polynomials over the Boolean cube carry
//! arbitrary-precision rational coefficients, the linear programs that compute
//! optimal refutation sizes are solved with a rational simplex, and the
//! explicit certificate constructions are verified pointwise over the cube.
//!
//! Module map:
//! * [`algebra`] — literals, monomials, sparse polynomials, assignments.
//! * [`systems`] — the pigeonhole and ordering axiom families, weakening and
//!   assignment enumerators, symmetry quotients.
//! * [`lp`] — exact simplex, model builders for the total-coefficient-size
//!   programs, and column/constraint generation with separation oracles.
//! * [`php_dual`] — the explicit dual witness for the pigeonhole family and
//!   its closed-form analytics.
//! * [`ord_proofs`] — explicit refutations of the ordering family, a pointwise
//!   certificate verifier, the no-minimum restriction transform, and the
//!   sum-of-squares refutation.
//! * [`tables`] — reference values for the reproducible result tables.
//! * [`acceptance`] — the runnable acceptance checklist.

mod zeta;

pub mod acceptance;
pub mod decimal;
pub mod algebra;
pub mod lp;
pub mod ord_proofs;
pub mod php_dual;
pub mod systems;
pub mod tables;

pub use algebra::{Assignment, Monomial, Polynomial, Rational, VarId};
pub use systems::{AxiomSystem, FamilyTag, HoleSets, Weakening};

/// Convenience constructor for a rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    use num_bigint::BigInt;
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for an integer rational.
pub fn int(num: i64) -> Rational {
    use num_bigint::BigInt;
    Rational::from(BigInt::from(num))
}
