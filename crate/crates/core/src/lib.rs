//! Fundamental solutions of `(Δ − λ_z)^ν` on Riemannian symmetric spaces
//! `G/K` with `G` complex semisimple, together with the root-system,
//! spherical-function and Bessel machinery they are built from, and
//! independent numerical oracles for every closed form.

pub mod error;
pub mod fundsol;
pub mod oracle;
pub mod quad;
pub mod rootsys;
pub mod special;
pub mod spherical;
pub mod verify;

pub use error::{Error, Result};
