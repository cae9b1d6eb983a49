//! Well-conditioned interpolation nodes for Zernike-like bases on the unit
//! disk and on the regular hexagon, the ellipse and the annulus.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and
//! parallel sweeps live in the `zernodes` crate.
//!
//! - [`zernike`]: Zernike circle polynomials and index conversions.
//! - [`samplings`]: OCS, Carnicer, Cuyt, spiral, random-thinned and
//!   approximate Fekete node sets.
//! - [`domains`]: disk diffeomorphisms, node transfer and the transferred
//!   families `K`, `H`, `E`, `O`, `C`.
//! - [`collocation`]: collocation matrices, `κ₂`, interpolation, Lebesgue
//!   constants.
//! - [`wavefront`]: turbulence wavefronts and zonal reconstruction over a
//!   36-segment aperture.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod collocation;
pub mod domains;
pub mod error;
pub mod quadrature;
pub mod rng;
pub mod samplings;
pub mod wavefront;
pub mod zernike;

pub use collocation::{
    assemble, condition_number, lebesgue_constant, solve_interpolation, CollocationMatrix,
    ConditionReport, Interpolator,
};
pub use domains::{transfer_nodes, transfer_nodes_with_epsilon, Basis, Domain, Family};
pub use error::{Error, Result};
pub use samplings::{Generator, NodeSet, Scheme};
pub use zernike::{basis_size, Point, Polar, ZernikeIndex};
