//! Boolean algebras, their free product, Carathéodory spaces of place
//! functions, and the Riesz space tensor product in an atom-coordinate model,
//! together with the verification suites and certificates that exercise them.

pub mod algebra;
pub mod bands;
pub mod error;
pub mod free_product;
pub mod place;
pub mod riesz;
pub mod scalar;
pub mod verify;

pub use algebra::{Algebra, AlgebraKind, BooleanAlgebra, Elem, Sample};
pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use free_product::{BackendForm, BackendProduct, FreeProduct, RectForm};
pub use place::{PlaceFunction, PlaceSpace};
pub use riesz::{AtomSpace, AtomVector, LinearLatticeMap, RieszSpace};

/// Place function on a backend algebra with exact rational coefficients.
pub type PlaceFn = PlaceFunction<Elem, Rational>;
/// Place function on a backend algebra with floating-point coefficients.
pub type PlaceFnF64 = PlaceFunction<Elem, f64>;
/// Place function on a free product of backend algebras.
pub type ProductPlaceFn = PlaceFunction<BackendForm, Rational>;
pub type AtomVec = AtomVector<Rational>;
pub type AtomVecF64 = AtomVector<f64>;
