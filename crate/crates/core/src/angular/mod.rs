//! Angular-momentum algebra: half-integers, Wigner symbols, spherical harmonics
//! and the σ = ±1 rows of the Wigner rotation matrix.

mod exact;
mod halfint;
mod harmonics;
mod wigner;

pub use exact::{double_factorial, factorial, SqrtRational};
pub(crate) use exact::ratio_to_f64;
pub use halfint::{triangle, HalfInt, HalfIntError};
pub use harmonics::{
    sph_harm, sph_harm_angles, wigner_d_pm1, wigner_d_pm1_closed, DirectionError, SphDirection,
};
pub use wigner::{wigner3j, wigner3j_exact, wigner6j, wigner6j_exact};
