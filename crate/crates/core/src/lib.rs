//! Boundary integral solver for the singular elliptic equation
//!
//! ```text
//! u_xx + u_yy + u_zz + (2α/x) u_x = 0,   0 < 2α < 1,
//! ```
//!
//! posed on bounded domains of the half-space `x > 0` whose boundary is a
//! surface `Γ` in `x > 0` together with a planar piece `X` of the plane
//! `x = 0`.
//!
//! The pipeline is: special functions ([`specfun`]) feed the fundamental
//! solutions and double-layer kernels ([`kernels`]); surfaces and quadrature
//! grids live in [`geometry`]; layer and plane potentials in [`potentials`];
//! the Nyström discretization in [`bie`]; the Dirichlet and Holmgren solvers
//! in [`bvp`]; and the closed-form half-ball oracles in [`hemisphere`].
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. With `std`, matrix assembly and batch evaluation run on rayon.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bie;
pub mod bvp;
pub mod error;
pub mod geometry;
pub mod hemisphere;
pub mod kernels;
pub mod math;
pub mod par;
pub mod potentials;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use geometry::{HalfSpacePoint, ParamSurface, PlanarRegion, QuadratureGrid};
pub use kernels::{KernelKind, Kernels, SingularityParams};
pub use math::Vec3;
