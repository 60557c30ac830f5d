//! Exact arithmetic on the Legendre curve `y^2 = x(x+1)(x+u^d)` over
//! `F_p(mu_d)(u)` with `d = p^f + 1`: finite fields, rational functions,
//! the Weierstrass group law, the explicit points `P_i`, canonical heights
//! and Gram matrices, closed-form BSD invariants and the 2-isogeny to `E'`.

pub mod curve;
pub mod gf;
pub mod heights;
pub mod invariants;
pub mod isogeny;
pub mod legendre;
pub mod linalg;
pub mod ratfunc;

pub use curve::{CoordChange, CurveError, CurvePoint, IsogenyMap, WeierstrassCurve};
pub use gf::{build_field, Field, FieldCtx, FieldElement, FieldError, FieldExt};
pub use heights::{
    gram_theoretical, GramMatrix, HeightConfig, HeightEngine, HeightError, HeightTrace, Rat,
};
pub use invariants::{BsdReport, FiberData, InvariantError};
pub use isogeny::IsogenyChain;
pub use legendre::{Family, FamilyError, FamilyParams, TorsionSet};
pub use ratfunc::{Poly, PolyError, RatFunc};

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
