//! Exact localization computations for framed sheaves on the plane, the
//! blow-up and stable/co-stable identities for their Nekrasov series, and
//! extraction of the universal vertical Vafa-Witten series.

pub mod algebra;
pub mod blowup;
pub mod error;
pub mod cache;
pub mod direct;
pub mod linalg;
pub mod modular;
pub mod nekrasov;
pub mod partitions;
pub mod report;
pub mod toric;
pub mod universal;
pub mod vw;

pub use error::{Error, Result};
