//! Exact coefficient rings and series containers.

pub mod cyclofrac;
pub mod intpoly;
pub mod qseries;
pub mod ring;
pub mod subst;
pub mod ulaurent;
pub mod weight;
pub mod yfrac;
pub mod ypoly;

pub use cyclofrac::CycloFrac;
pub use qseries::{rat, rint, QSeries, Rat};
pub use ring::{Field, Ring};
pub use subst::{one_minus_inverse_weight_series, weight_eval, FramingImage, SubstitutionSpec};
pub use ulaurent::{ULaurentSeries, EXACT};
pub use weight::{Character, Weight};
pub use yfrac::YFraction;
pub use ypoly::YPoly;
