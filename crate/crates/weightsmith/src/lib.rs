//! Constructive weight-building toolkit: explicit network weights for
//! shallow, residual, fully connected, and densely connected architectures
//! over the real and complex numbers, plus a numerical verification harness.
//!
//! Every builder in this crate produces concrete weights from a closed-form
//! recipe — nothing is trained. Each construction comes with a measurable
//! claim (an approximation rate in a step parameter, or exactness to
//! rounding), and the harness in [`analysis`], [`grid`], and [`harmonic`]
//! checks those claims numerically.
//!
//! # Modules
//!
//! * [`field`] — real/complex scalar type with an explicit field tag.
//! * [`activation`] — activations as closed forms plus power-series
//!   coefficients (exp, sin, cos, sinh, cosh, finite polynomials,
//!   rectifiers).
//! * [`poly`] — multivariate polynomials keyed by exponent multi-indices.
//! * [`shallow`] — one-hidden-layer networks; finite-difference builders
//!   that turn any activation with a usable series coefficient into
//!   monomial and polynomial approximators ([`shallow::build_monomial_1d`],
//!   [`shallow::build_polynomial`]).
//! * [`deep`] — residual networks, fully connected networks, densely
//!   connected networks; exact embeddings of shallow nets into each
//!   ([`deep::resnet_from_shallow`], [`deep::mlp_from_shallow`],
//!   [`deep::densenet_from_shallow`]) and polynomial evaluators in
//!   constant width ([`deep::resnet_poly_square`],
//!   [`deep::resnet_poly_general`]).
//! * [`relu`] — what rectifiers do exactly: maxima of affine pieces,
//!   differences of maxima, logarithmic-depth tournaments, second-order
//!   interpolation of twice-differentiable functions, and exact layered
//!   forms of rectifier shallow nets.
//! * [`harmonic`] — networks with identically vanishing Laplacian,
//!   Gegenbauer/zonal machinery, harmonic polynomial spaces, rotation
//!   averages and spans, fundamental systems.
//! * [`analysis`] — contour integrals and the moment obstruction that rules
//!   out uniform polynomial approximation on annuli; barycentric Lagrange
//!   interpolation and the equispaced-node divergence table; convergence
//!   studies for the builders.
//! * [`grid`], [`finite_diff`], [`linalg`], [`table`] — sup-norm grids,
//!   difference stencils, small dense solvers, CSV result tables.
//! * [`document`] — versioned JSON round-tripping for every network kind.
//! * [`cli`] — the `weightsmith` command-line front end (build / embed /
//!   eval / verify / report).
//!
//! # Examples
//!
//! Each major capability has a runnable example (`cargo run --example
//! <name>`):
//!
//! * `monomial_convergence` — shallow monomial builders and their
//!   first-order error decay in the difference step.
//! * `shallow_polynomial` — full polynomial targets through one hidden
//!   layer, real and complex.
//! * `polynomial_truncation` — expanding a polynomial-activation network
//!   into its exact polynomial and truncating by degree.
//! * `resnet_embedding` — shallow nets as residual networks, exactly, at
//!   every block partition, with the closed-form parameter count.
//! * `deep_polynomial` — constant-width residual evaluation of multivariate
//!   polynomials: exact with the squaring activation, second order in the
//!   probe step for generic smooth activations.
//! * `mlp_densenet_embedding` — shallow nets through deeper fully connected
//!   stacks via near-identity lanes, and exactly into densely connected
//!   nets.
//! * `relu_constructions` — the rectifier toolbox: exact piecewise-linear
//!   computation, log-depth maxima, and second-order interpolation.
//! * `harmonic_networks` — networks that are harmonic by construction,
//!   verified by finite differences, with a failing control.
//! * `rotation_spans` — rotation averages of polynomials, spans of rotated
//!   harmonics, dimensions, and fundamental systems on the sphere.
//! * `cauchy_obstruction` — the contour-integral gap that defeats every
//!   polynomial approximant of `z^(-k)` on an annulus.
//! * `runge_phenomenon` — equispaced interpolation diverging on a smooth
//!   target while still reproducing its nodes.

pub mod activation;
pub mod analysis;
pub mod cli;
pub mod deep;
pub mod document;
pub mod error;
pub mod field;
pub mod finite_diff;
pub mod grid;
pub mod harmonic;
pub mod linalg;
pub mod poly;
pub mod relu;
pub mod shallow;
pub mod table;

pub use activation::{Activation, ActivationKind};
pub use error::{Error, Result};
pub use field::{FieldTag, Scalar};
pub use poly::{MPoly, MultiIndex};
pub use shallow::{Neuron, ShallowNet};
