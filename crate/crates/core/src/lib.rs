//! Exact-arithmetic toolkit for equivariant Hirzebruch genus computations on
//! omnioriented quasitoric manifolds.
//!
//! The crate is organised in layers:
//!
//! - [`rational`], [`symbols`], [`poly`]: exact rational coefficients and
//!   sparse polynomials in a fixed list of parameter symbols (the coefficient
//!   ring for everything else).
//! - [`series`]: truncated power series — dense univariate, sparse
//!   multivariate, and Laurent series in one variable.
//! - [`genera`]: genus exponents (elliptic sine, Krichever b2=0 family, Todd),
//!   formal group laws and CP^k coefficient extraction.
//! - [`quasitoric`]: simple-polytope combinatorics, characteristic matrices,
//!   and the fixed-point sign/weight engine.
//! - [`localization`]: evaluation of the equivariant genus on generic lines
//!   and rigidity verdicts.
//! - [`rigidity`]: the limit identities, restricted/symmetrised rigidity
//!   equations, the z^3 differential equation and the ansatz reduction that
//!   force the elliptic sine.
//!
//! All arithmetic is exact; there is no floating point anywhere in the crate.

pub mod error;
pub mod genera;
pub mod localization;
pub mod poly;
pub mod quasitoric;
pub mod rational;
pub mod rigidity;
pub mod series;
pub mod symbols;

pub use error::{Error, Result};
pub use poly::ParamPoly;
pub use rational::Rational;
pub use series::laurent::LaurentSeries;
pub use series::multi::TruncSeries;
pub use series::univariate::{ExponentSeries, PowerSeries1};
pub use symbols::{ParamSet, VarSet};
