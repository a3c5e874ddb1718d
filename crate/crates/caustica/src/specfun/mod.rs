//! Self-contained special functions: Airy Ai and its zeros, Bessel J of
//! integer order and its zeros, and the large-order transition function
//! linking the two.

mod airy;
mod bessel;
pub mod olver;

pub use airy::{airy_ai, airy_ai_prime, airy_zero, AiryZeroTable};
pub use bessel::{bessel_j, bessel_j_prime, bessel_zero, bessel_zeros_in_interval, BesselZero};
pub(crate) use bessel::j_with_prime;
pub use olver::{olver_f, olver_p0, olver_t_of_z};
