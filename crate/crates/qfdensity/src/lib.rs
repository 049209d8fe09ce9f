//! Exact p-adic local densities of diagonal ternary quadratic forms at odd
//! primes.
//!
//! For a form Q = a x^2 + b y^2 + c z^2 with nonzero integer coefficients,
//! an odd prime p, and an integer target m, the local representation count
//! at depth k is
//!
//! ```text
//! r(m, Q; p^k) = #{ (x, y, z) in (Z/p^k Z)^3 : Q(x, y, z) = m (mod p^k) }
//! ```
//!
//! and the local density is the stable value of r / p^{2k}. This crate
//! computes that density as an exact rational number, by three mutually
//! independent routes that cross-check one another:
//!
//! * closed-form branch formulas in the valuations of b, c, m
//!   ([`density::local_density`]),
//! * a stratified assembly of quadratic Gauss sums over the unit groups of
//!   Z/p^j ([`localcount::count_stratified`]),
//! * direct enumeration via square histograms ([`localcount::count_bruteforce`]).
//!
//! [`verify`] wires the three together over parameter grids; the CLI and the
//! acceptance suite both drive it.

pub mod charsums;
pub mod density;
pub mod error;
pub mod gauss;
pub mod localcount;
pub mod ntkernel;
pub mod verify;

pub use error::{Error, Result};
pub use ntkernel::{OddPrime, PAdicSplit, PhaseUnit, Rational};
