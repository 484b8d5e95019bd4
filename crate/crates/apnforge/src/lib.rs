//! Kernel-dimension machinery for the trinomial linearized polynomials
//! f_mu(x) = x^{2^{m+s}} + mu x^{2^s} + x over GF(2^{3m}), and everything
//! built on top of it: exhaustive per-norm-class censuses, permutation
//! parameter search, APN certification of the associated quadratic family,
//! symbolic resultants with plane-curve point counts, and the explicit
//! point-count threshold computation.
//!
//! Modules:
//! - [`field`]: exact GF(2^n) arithmetic, n <= 48, with the subfield tower.
//! - [`linpoly`]: 2-linearized polynomials and three kernel-dimension routes.
//! - [`census`]: value-map fiber census per norm class, counting identities,
//!   and the table-driven constructive search for permutation parameters.
//! - [`apn`]: differential uniformity of function tables and certification
//!   of the candidate family.
//! - [`variety`]: sparse multivariate polynomials over GF(2)/GF(8),
//!   Sylvester resultants, curve point counts, and the explicit threshold.

pub mod apn;
pub mod bitmat;
pub mod census;
pub mod error;
pub mod field;
pub mod linpoly;
pub mod mpoly;
pub mod variety;

pub use error::{Error, Result};
pub use field::{make_field, make_field_with_modulus, Fe, FieldCtx};
