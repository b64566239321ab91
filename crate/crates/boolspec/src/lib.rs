//! Fourier analysis of Boolean functions in the `{-1,+1}` (sign) convention,
//! exact LP-based computation of approximate degree and approximate spectral
//! norm, and exact simulation of a query algorithm built from
//! Bernstein–Vazirani and verified Grover search.
//!
//! # Conventions
//!
//! These conventions are global and every module relies on them.
//!
//! * **Bits are signs.** A Boolean value is `+1` or `-1` (`i8`). The logical
//!   XOR of two sign values is their product.
//! * **Variables are 0-based ids.** A function on `n` variables uses ids
//!   `0..n`.
//! * **Points are indices.** A point `x` in `{-1,+1}^n` is encoded as a
//!   `u64` index: bit `i` of the index is `1` exactly when `x_i = -1`.
//!   Variable `0` is the least significant bit. Truth tables are `Vec<i8>`
//!   of length `2^n` indexed this way.
//! * **Subsets are masks.** A subset `S` of variables is a `u64` bitmask;
//!   bit `i` set means variable `i` is in `S`. The character
//!   `chi_S(x) = prod_{i in S} x_i` therefore equals
//!   `(-1)^popcount(S & index(x))`.
//! * **Fourier coefficients** use the uniform measure:
//!   `f_hat(S) = 2^-n * sum_x f(x) * chi_S(x)`, so
//!   `f(x) = sum_S f_hat(S) * chi_S(x)`.
//!
//! Everything here is deterministic: no randomness, no parallelism, no
//! iteration over hash maps. Running the same operation twice produces
//! bit-identical results.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod approxlp;
pub mod boolfn;
pub mod constructions;
mod error;
pub mod liftlab;
pub mod poly;
pub mod qsim;

pub use error::{Error, Result};

/// Largest number of variables for which dense `2^n`-sized work
/// (transforms, truth tables, composed functions) is permitted.
pub const MAX_DENSE_VARS: u32 = 24;

/// Checks the dense-size guard, returning a [`Error::ResourceLimit`] that
/// names the offending operation when `n` exceeds [`MAX_DENSE_VARS`].
pub(crate) fn check_dense_guard(n: u32, what: &str) -> Result<()> {
    if n > MAX_DENSE_VARS {
        return Err(Error::ResourceLimit(format!(
            "{what} on {n} variables exceeds the {MAX_DENSE_VARS}-variable dense guard"
        )));
    }
    Ok(())
}
