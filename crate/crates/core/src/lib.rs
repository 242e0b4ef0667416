//! Numerical toolkit for outgoing time-harmonic waves.
//!
//! The crate evaluates Bessel and Hankel functions of real order, turns the
//! classical asymptotic regimes of the Hankel function into executable
//! two-sided bounds, reconstructs near fields from noisy far-field data with
//! certified error bounds, solves the 2D sound-soft scattering problem by a
//! Nyström discretization, and evaluates the instability calculators for
//! the inverse obstacle problem.

pub mod config;
pub mod direct2d;
pub mod far2near;
pub mod geometry;
pub mod instability;
pub mod modal;
pub mod noise;
pub mod specfun;
