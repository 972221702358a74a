#![allow(clippy::needless_range_loop)]

pub mod bordmap;
pub mod complexes;
pub mod freegroup;
pub mod graphs;
pub mod jewel;
pub mod morse;
pub mod scalar;
pub mod stars;

pub use scalar::{Rational, Scalar};

/// Jewel with exact rational coordinates.
pub type ExactJewel = jewel::JewelPolytope<Rational>;
/// Jewel with binary64 coordinates.
pub type FloatJewel = jewel::JewelPolytope<f64>;
pub type ExactBordMap = bordmap::BordMap<Rational>;
pub type FloatBordMap = bordmap::BordMap<f64>;
