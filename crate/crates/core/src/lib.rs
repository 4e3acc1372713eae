//! Exact construction of the rational Painlevé-II function families and
//! numerical validation of their large-degree asymptotics near the boundary
//! of the elliptic region.
//!
//! The crate is organized around five layers:
//!
//! * [`poly`] / [`ratfn`] / [`ladder`] — exact big-rational polynomial
//!   arithmetic and the Bäcklund recursion producing the families
//!   `U_m`, `V_m`, `P_m`, `Q_m`.
//! * [`bigfloat`] / [`scaled`] / [`roots`] — arbitrary-precision evaluation,
//!   log-space complex values, and certified polynomial root finding.
//! * [`geometry`] — the branch-resolved scalar functions of the scaled
//!   variable `x` (the cubic branch `S`, band endpoints, the contour
//!   integrals `c`/`d`, the normalization constants `lambda`/`mu`) and
//!   tracing of the elliptic-region boundary.
//! * [`edge`] / [`painleve1`] — the trigonometric edge series and the
//!   Painlevé-I tritronquée corner model.
//! * [`compare`] / [`acceptance`] — comparison harness, pole matching and
//!   the acceptance suite.

pub mod acceptance;
pub mod bigfloat;
pub mod compare;
pub mod edge;
pub mod gauss;
pub mod geometry;
pub mod ladder;
pub mod painleve1;
pub mod poly;
pub mod ratfn;
pub mod roots;
pub mod scaled;

pub use ladder::{ladder_build, verify_coupled, verify_pii, LadderState};
pub use poly::BigRationalPoly;
pub use ratfn::RationalFunction;
pub use scaled::ScaledComplex;

/// Complex double shorthand used throughout the numerical layers.
pub type C64 = num_complex::Complex64;
