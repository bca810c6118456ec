//! Dirac operators on quantum irreducible flag manifolds of type A.
//!
//! All algebra happens exactly over `ℚ(q)`: the quantized enveloping algebra
//! ([`uqg`]), its representations ([`reps`]), the flag data and tangent space
//! ([`flag`]), the Clifford action ([`clifford`]), spinor sections
//! ([`spinor`]) and the Dirac blocks ([`dirac`]). Numerical evaluation at a
//! real `q > 1` happens only when spectra or norms are requested. The
//! [`calculus`] module checks the first-order calculus spanned by `[D, f]`.
//!
//! ```
//! use qflag::cartan::{build_cartan, LieType};
//! use qflag::dirac::Geometry;
//!
//! let geo = Geometry::new(build_cartan(LieType::A, 1)?, 0, 1)?;
//! let spectrum = geo.spectrum(1.2, 4)?;
//! assert!(spectrum.entries.iter().all(|e| e.multiplicity % 2 == 0));
//! # Ok::<(), qflag::Error>(())
//! ```

pub mod calculus;
pub mod cartan;
pub mod dirac;
pub mod clifford;
pub mod error;
pub mod flag;
pub mod linalg;
pub mod poly;
pub mod reps;
pub mod scalar;
pub mod spinor;
pub mod uqg;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/quantum-groups.md")]
    struct QuantumGroups;
    #[doc = include_str!("../../../book/src/representations.md")]
    struct Representations;
    #[doc = include_str!("../../../book/src/flag-manifolds.md")]
    struct FlagManifolds;
    #[doc = include_str!("../../../book/src/spinors.md")]
    struct Spinors;
    #[doc = include_str!("../../../book/src/dirac.md")]
    struct Dirac;
    #[doc = include_str!("../../../book/src/calculus.md")]
    struct Calculus;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
