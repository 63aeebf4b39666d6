//! Exact computer algebra for commutative rings of prime characteristic:
//! arithmetic in perfect closures, Gröbner bases over level truncations,
//! free resolutions, Koszul/Čech/Ext grades, Tor and Ext, Hilbert–Kunz
//! multiplicities, p-typical Witt vectors and truncated tilts.

pub mod error;
pub mod exponent;
pub mod field;
pub mod gb;
pub mod hilbert_kunz;
pub mod homology;
pub mod ideal;
pub mod linalg;
pub mod parse;
pub mod perfpoly;
pub mod reports;
pub mod ring;
pub(crate) mod serde_text;
pub mod valuation;
pub mod witt;

pub use error::{Error, Result};
pub use exponent::PExponent;
pub use field::{FpElem, PrimeChar};
pub use perfpoly::{vars_from, PerfMonomial, PerfPoly, Vars};

pub use ring::{IdealHandle, LevelRing, RelationMode, RingFile, RingPresentation};
