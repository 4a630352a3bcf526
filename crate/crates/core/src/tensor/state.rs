use std::fmt;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::{basis_index, checked_dim, RngState, ALGEBRAIC_TOL};
use crate::error::{Error, Result};

/// Normalized amplitude vector of `n` qudits with local dimension `d`.
#[derive(Clone, PartialEq)]
pub struct PureState {
    n: usize,
    d: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps `amplitudes`, requiring length `d^n` and unit norm within 1e-12.
    pub fn new(n: usize, d: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_norm_tolerance(n, d, amplitudes, ALGEBRAIC_TOL)
    }

    pub fn with_norm_tolerance(
        n: usize,
        d: usize,
        amplitudes: Vec<Complex64>,
        tolerance: f64,
    ) -> Result<Self> {
        let expected = checked_dim(n, d)?;
        if amplitudes.len() != expected {
            return Err(Error::ShapeMismatch {
                n,
                d,
                expected,
                found: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        // written negated so that a NaN norm is rejected
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !((norm - 1.0).abs() <= tolerance) {
            return Err(Error::NormViolation { norm, tolerance });
        }
        Ok(Self { n, d, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(n: usize, d: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let expected = checked_dim(n, d)?;
        if amplitudes.len() != expected {
            return Err(Error::ShapeMismatch {
                n,
                d,
                expected,
                found: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::domain(format!("cannot normalize a vector of norm {norm}")));
        }
        let scale = 1.0 / norm;
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { n, d, amplitudes })
    }

    /// The computational basis ket `|digits>`.
    pub fn basis(n: usize, d: usize, digits: &[usize]) -> Result<Self> {
        let dim = checked_dim(n, d)?;
        if digits.len() != n {
            return Err(Error::domain(format!(
                "expected {n} digits, got {}",
                digits.len()
            )));
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[basis_index(digits, d)?] = Complex64::ONE;
        Ok(Self { n, d, amplitudes })
    }

    /// Gaussian random vector, normalized (uniform on the unit sphere).
    pub fn random(n: usize, d: usize, rng: &mut RngState) -> Result<Self> {
        let dim = checked_dim(n, d)?;
        let amplitudes = (0..dim).map(|_| complex_normal(rng)).collect();
        Self::normalized(n, d, amplitudes)
    }

    pub(crate) fn from_parts_unchecked(n: usize, d: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), d.pow(n as u32));
        Self { n, d, amplitudes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, digits: &[usize]) -> Result<Complex64> {
        if digits.len() != self.n {
            return Err(Error::domain(format!(
                "expected {} digits, got {}",
                self.n,
                digits.len()
            )));
        }
        Ok(self.amplitudes[basis_index(digits, self.d)?])
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest entrywise modulus difference.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same_shape(&self, other: &PureState) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::domain(format!(
                "shape mismatch: (n={}, d={}) vs (n={}, d={})",
                self.n, self.d, other.n, other.d
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PureState(n={}, d={}) [", self.n, self.d)?;
        let mut first = true;
        for (index, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-14 {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            let digits = super::basis_digits(index, self.n, self.d).map_err(|_| fmt::Error)?;
            let ket: Vec<String> = digits.iter().map(|x| x.to_string()).collect();
            write!(f, "|{}> {:.6}{:+.6}i", ket.join(","), a.re, a.im)?;
        }
        write!(f, "]")
    }
}

/// `<a|b>`, conjugating `a`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<Complex64> {
    a.check_same_shape(b)?;
    Ok(a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub(crate) fn complex_normal(rng: &mut RngState) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
