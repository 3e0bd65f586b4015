//! Exact-arithmetic building blocks for Fontaine-Laffaille-type smoothness
//! criteria: root-datum/coweight combinatorics, affine-Schubert tangent
//! spaces with the monodromy cut, a truncated p-adic series engine, and
//! loop-group shape/lattice computations over F_q((u)).
//!
//! Everything is computed over exact integers, rationals, or prime fields;
//! no floating point anywhere.

pub mod acceptance;
pub mod error;
pub mod flrange;
pub mod laurent;
pub mod linalg;
pub mod loopgr;
pub mod padic;
pub mod rootdatum;
pub mod schubert;
pub mod series;

pub use error::Error;
pub use rootdatum::{Coweight, MultiCoweight, RootDatum};
