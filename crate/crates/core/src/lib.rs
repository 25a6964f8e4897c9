//! Exact bifurcation indices and continuum verdicts for `SO(N)`-symmetric
//! gradient elliptic systems on spheres.
//!
//! The pipeline, bottom up:
//!
//! * [`system`]: the system signature and its four coordinate counts,
//! * [`rep`]: spherical harmonics `H^N_m` as `SO(2)`-representations,
//! * [`euler`]: the Euler ring `U(SO(2))`,
//! * [`degree`]: degrees of `±Id` on representation balls,
//! * [`spectrum`]: eigenvalues of the linearisation and the level set `Λ`,
//! * [`index`]: bifurcation indices, computed three ways,
//! * [`classify`]: verdicts and the search for bounded continua,
//! * [`report`] and [`selftest`]: what the `bifsphere` binary prints.
//!
//! ```
//! use bifsphere::index::bif;
//! use bifsphere::spectrum::Level;
//! use bifsphere::system::parse_spec;
//!
//! let spec = parse_spec(r#"{"N": 3, "a": [-1], "b": [1], "orbits": 1}"#)?;
//! assert_eq!(bif(&spec, Level::PlusBeta(1))?.value.to_string(), "(2, {Z1:-1})");
//! # Ok::<(), bifsphere::error::Error>(())
//! ```
//!
//! The accompanying book (under `book/`) walks through each layer; its code
//! listings run as doc-tests of this crate.

pub mod classify;
pub mod degree;
pub mod error;
pub mod euler;
pub mod index;
pub mod jsonint;
pub mod rep;
pub mod report;
pub mod selftest;
pub mod spectrum;
pub mod system;

// Book chapters, compiled as doc-tests so the listings stay correct.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/systems.md")]
    mod systems {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/euler-ring.md")]
    mod euler_ring {}
    #[doc = include_str!("../../../book/src/degrees.md")]
    mod degrees {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/indices.md")]
    mod indices {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
