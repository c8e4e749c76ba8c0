//! Exact analytic machinery for multivariate rational generating functions.
//!
//! The crate decides, in exact rational arithmetic, how the coefficients of
//! a rational series `P/Q` grow along a lattice direction: whether the
//! relevant critical points escape to infinity (and at what heights), where
//! the affine critical points sit, and what leading asymptotic term a smooth
//! critical point contributes.  A small certified-numerics layer (complex
//! interval boxes over the rationals) backs the parts that need floating
//! output without giving up on proofs.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (on by default) only adds `std::error::Error` impls and plugs into the
//! companion command-line crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod asympt;
pub mod critical;
pub mod groebner;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod rat;
pub mod spai;
