//! Exact symbolic toolkit for Chern–Moser normal forms of strongly
//! pseudoconvex hypersurfaces whose stability group is a large subgroup of
//! the unitary group.
//!
//! The crate is generic over an exact real field ([`Scalar`]); the aliases
//! below fix it to arbitrary-precision rationals, which is what the command
//! line front end and the test suites use.
//!
//! * [`poly`], [`gaussian`], [`matrix`]: exact arithmetic, differentiation
//!   and fraction-free nullspaces.
//! * [`groups`]: the catalog of closed connected subgroups of `Uₙ` and
//!   their infinitesimal action on polynomials.
//! * [`normal_form`]: the trace operator, normal-form identities and the
//!   six special forms plus the two earlier ones.
//! * [`invariants`]: invariant polynomial spaces per bidegree.
//! * [`classification`]: the arithmetic behind the subgroup classification:
//!   block structures, the factorization bound, the simple-algebra table and
//!   the Weyl dimension formula.
//! * [`io`]: text grammar for polynomials and the JSON surface document.

pub mod classification;
pub mod error;
pub mod gaussian;
pub mod groups;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod normal_form;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use gaussian::Gaussian;
pub use groups::{GroupKind, GroupSpec, LieElement};
pub use matrix::{ExactMatrix, SparseEchelon};
pub use normal_form::{FormId, NormalFormSurface};
pub use poly::{Coefficient, Constraint, Monomial, Poly, Var};
pub use scalar::Scalar;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Gaussian rationals `a + bi`, `a, b ∈ ℚ`.
pub type GaussianRational = Gaussian<Rational>;
pub type Polynomial = Poly<Rational>;
pub type RationalCoefficient = Coefficient<Rational>;
pub type GaussianMatrix = ExactMatrix<Rational>;
pub type RationalLieElement = LieElement<Rational>;
pub type Surface = NormalFormSurface<Rational>;

/// Machine-word rationals; fast but overflow-prone, fine for small inputs.
pub type Rational64 = num_rational::Ratio<i64>;
pub type Polynomial64 = Poly<Rational64>;
