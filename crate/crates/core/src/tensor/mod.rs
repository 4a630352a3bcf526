//! Dense qudit state vectors and the linear algebra the verifier is built on.
//!
//! Particle positions are 1-based throughout the crate. Particle 1 is the
//! most significant base-`d` digit of a flat amplitude index, so the ket
//! `|x1, x2, ..., xn>` lives at `sum_p x_p * d^(n - p)`.

mod density;
mod rng;
mod state;
mod unitary;

pub use density::{deviation_from_maximally_mixed, partial_trace, DensityMatrix};
pub use rng::RngState;
pub use state::{inner_product, PureState};
pub use unitary::{haar_random_unitary, UnitaryMatrix};

use crate::error::{Error, Result};

/// Largest state vector the constructors will allocate (2^26 amplitudes, 1 GiB).
pub const MAX_AMPLITUDES: usize = 1 << 26;

/// Slack for exact algebraic identities (normalization, Hermiticity, trace).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Slack for unitarity and positive-semidefiniteness checks.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Eigenvalue-based PSD checks are only run up to this matrix dimension.
pub const EIGEN_DIM_LIMIT: usize = 256;

/// Returns `d^n`, or a capacity error when it exceeds [`MAX_AMPLITUDES`].
pub fn checked_dim(n: usize, d: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::domain("particle count must be at least 1"));
    }
    if d < 2 {
        return Err(Error::domain(format!("local dimension must be at least 2, got {d}")));
    }
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = match dim.checked_mul(d) {
            Some(v) if v <= MAX_AMPLITUDES => v,
            _ => {
                return Err(Error::Capacity {
                    n,
                    d,
                    limit: MAX_AMPLITUDES,
                })
            }
        };
    }
    Ok(dim)
}

/// Flat index of the computational basis ket with the given digits.
pub fn basis_index(digits: &[usize], d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::domain(format!("local dimension must be at least 2, got {d}")));
    }
    let mut index: usize = 0;
    for (p, &digit) in digits.iter().enumerate() {
        if digit >= d {
            return Err(Error::domain(format!(
                "digit {digit} at particle {} is outside [0, {d})",
                p + 1
            )));
        }
        index = index
            .checked_mul(d)
            .and_then(|v| v.checked_add(digit))
            .ok_or_else(|| Error::domain("basis index overflows usize"))?;
    }
    Ok(index)
}

/// Inverse of [`basis_index`]: the `n` digits of `index` in base `d`.
pub fn basis_digits(index: usize, n: usize, d: usize) -> Result<Vec<usize>> {
    let dim = checked_dim(n, d)?;
    if index >= dim {
        return Err(Error::domain(format!("index {index} is outside [0, {dim})")));
    }
    let mut digits = vec![0; n];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    Ok(digits)
}

pub(crate) fn validate_positions(n: usize, positions: &[usize]) -> Result<()> {
    if positions.is_empty() {
        return Err(Error::domain("position set must be nonempty"));
    }
    let mut seen = vec![false; n + 1];
    for &p in positions {
        if p == 0 || p > n {
            return Err(Error::domain(format!("position {p} is outside 1..={n}")));
        }
        if seen[p] {
            return Err(Error::domain(format!("position {p} appears more than once")));
        }
        seen[p] = true;
    }
    Ok(())
}
