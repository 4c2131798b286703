//! Linear-programming upper bounds for sphere packing densities in
//! commutative spaces.
//!
//! The bound engine works on four concrete families of spaces — Euclidean
//! space, real hyperbolic space, the round sphere and the Heisenberg group
//! with the Cygan–Koranyi metric — and searches for *witness functions*:
//! radial functions `f` with
//!
//! * (W1) `f(x) <= 0` whenever `d(x, x0) >= 2r`,
//! * (W2) nonnegative spherical transform and `f̂(1) > 0`,
//! * (W3) explicit decay control (an envelope),
//!
//! which certify the density bound
//! `density(r) <= ball_volume(r) * f(e) / f̂(1)`.
//!
//! The crate is organized around that pipeline:
//!
//! * [`specfun`] — the special-function kernel (₂F₁, Bessel, Laguerre,
//!   Gegenbauer, Γ),
//! * [`geometry`] — radial coordinates, Haar densities, ball volumes and
//!   the radial function type,
//! * [`spectra`] — spherical functions and the spherical transform on each
//!   spectrum,
//! * [`abel`] — the hyperbolic Abel transform, its inversions and the
//!   witness pushforward to the Euclidean line,
//! * [`witness_lp`] — discretized witness search as a dense LP,
//! * [`certify`] — a-posteriori margin checks turning LP solutions into
//!   certificates,
//! * [`pointprocess`] — lattice packings, Poisson summation and packing
//!   count checks used as desk-scale validation,
//! * [`cli`] — the `packlp` command-line front end.

pub mod abel;
pub mod certify;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod pointprocess;
pub mod quad;
pub mod selftest;
pub mod simplex;
pub mod specfun;
pub mod spectra;
pub mod witness_lp;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
