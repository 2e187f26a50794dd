//! Optimal polynomial prediction measures on `[-1, 1]`.
//!
//! For an exterior point `z0` and degree `n`, the measure `mu` on `[-1, 1]`
//! minimizing the least-squares prediction variance `K_n^mu(z0, z0)` is
//! characterized by its normalized kernel polynomial having sup-norm one,
//! which makes that polynomial extremal for growth at `z0`. This crate
//! computes such designs numerically ([`design::optimize_support`]), in
//! closed form at purely imaginary points ([`imaginary`]), and checks the
//! statistical meaning of `K` by Monte Carlo ([`regression`]).
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod chebyshev;
pub mod design;
pub mod error;
pub mod imaginary;
pub mod measure;
pub mod polynomial;
pub mod regression;

pub use error::{Error, Result};
pub use num_complex::Complex64;
