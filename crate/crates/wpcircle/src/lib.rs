//! Spectral function-space analysis of circle homeomorphisms.
//!
//! The crate makes the Weil-Petersson theory of the circle executable at desk
//! scale: fractional Sobolev seminorms and their dual double-integral form,
//! BMO/VMO oscillation estimators, the algebra of monotone lifts, truncated
//! power-series calculus with Schwarzians and Grunsky matrices, the pull-back
//! operator P_h with its energy/commutator/welding identities, the metrics
//! d and d' on normalized maps, and a gallery of closed-form instances
//! (including a map whose log-derivative is H^{1/2} while the map itself is
//! neither Lipschitz nor H^{3/2}).
//!
//! Everything is generic over the working float through [`scalar::Scalar`];
//! the `*64`/`*32` aliases at the crate root pick a concrete precision.

pub mod bmo;
pub mod circle;
pub mod diagnostics;
pub mod error;
pub mod fourier;
pub mod gallery;
pub mod holo;
pub mod profile;
pub mod pullback;
pub mod scalar;

pub use error::{Error, Result};
pub use profile::{DyadicProfile, Trend, TrendConfig};
pub use scalar::Scalar;

pub type GridFunction64 = fourier::GridFunction<f64>;
pub type GridFunction32 = fourier::GridFunction<f32>;
pub type FourierSeries64 = fourier::FourierSeries<f64>;
pub type FourierSeries32 = fourier::FourierSeries<f32>;
pub type CircleMap64 = circle::CircleMap<f64>;
pub type CircleMap32 = circle::CircleMap<f32>;
pub type DerivativeData64 = circle::DerivativeData<f64>;
pub type PowerSeries64 = holo::PowerSeries<f64>;
pub type PowerSeries32 = holo::PowerSeries<f32>;
pub type BeltramiSample64 = holo::BeltramiSample<f64>;
pub type OperatorMatrix64 = pullback::OperatorMatrix<f64>;
pub type OperatorMatrix32 = pullback::OperatorMatrix<f32>;
pub type MembershipReport64 = diagnostics::MembershipReport<f64>;
pub type OscillationProfile64 = bmo::OscillationProfile<f64>;
pub type WeldingTriple64 = gallery::WeldingTriple<f64>;
