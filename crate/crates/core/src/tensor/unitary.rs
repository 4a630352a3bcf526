use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::complex_normal;
use super::{RngState, UNITARITY_TOL};
use crate::error::{Error, Result};

/// Square complex matrix with `||U^dag U - I||_F <= 1e-10`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(dim, entries, UNITARITY_TOL)
    }

    pub fn with_tolerance(dim: usize, entries: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("unitary dimension must be at least 1"));
        }
        if entries.len() != dim * dim {
            return Err(Error::domain(format!(
                "a {dim}x{dim} matrix needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let defect = unitarity_defect(dim, &entries);
        // written negated so that a NaN defect is rejected
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(defect <= tolerance) {
            return Err(Error::NonUnitary { defect, tolerance });
        }
        Ok(Self { dim, entries })
    }

    /// Builds from rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::domain("unitary rows must form a square matrix"));
        }
        Self::new(dim, rows.concat())
    }

    /// Builds from rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::ONE;
        }
        Self { dim, entries }
    }

    /// Cyclic shift `|j> -> |j + 1 mod dim>`.
    pub fn shift(dim: usize) -> Self {
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for j in 0..dim {
            entries[((j + 1) % dim) * dim + j] = Complex64::ONE;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[c * dim + r] = self.entries[r * dim + c].conj();
            }
        }
        Self { dim, entries }
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::domain(format!(
                "cannot compose {}x{} with {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        let dim = self.dim;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.entries[r * dim + k];
                for c in 0..dim {
                    entries[r * dim + c] += a * rhs.entries[k * dim + c];
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// `U |v>`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|r| {
                self.entries[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(u, x)| u * x)
                    .sum()
            })
            .collect()
    }

    pub fn defect(&self) -> f64 {
        unitarity_defect(self.dim, &self.entries)
    }

    pub fn frobenius_distance(&self, other: &UnitaryMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `||U^dag U - I||_F` for a row-major square matrix.
pub fn unitarity_defect(dim: usize, entries: &[Complex64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let mut g = Complex64::ZERO;
            for k in 0..dim {
                g += entries[k * dim + i].conj() * entries[k * dim + j];
            }
            if i == j {
                g -= 1.0;
            }
            sum += g.norm_sqr();
        }
    }
    sum.sqrt()
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_random_unitary(dim: usize, rng: &mut RngState) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::domain("unitary dimension must be at least 1"));
    }
    let mut draws = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        draws.push(complex_normal(rng));
    }
    let ginibre = DMatrix::from_row_slice(dim, dim, &draws);
    let qr = ginibre.qr();
    let q = qr.q();
    let r = qr.r();

    let mut entries = vec![Complex64::ZERO; dim * dim];
    for c in 0..dim {
        let diag = r[(c, c)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::ONE
        };
        for row in 0..dim {
            entries[row * dim + c] = q[(row, c)] * phase;
        }
    }
    UnitaryMatrix::new(dim, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_one_is_a_phase() {
        let u = haar_random_unitary(1, &mut RngState::from_seed(3)).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fixed_seed_is_deterministic_and_unitary() {
        let a = haar_random_unitary(4, &mut RngState::from_seed(17)).unwrap();
        let b = haar_random_unitary(4, &mut RngState::from_seed(17)).unwrap();
        assert_eq!(a, b);
        assert!(a.defect() <= 1e-10);
    }

    #[test]
    fn distinct_seeds_give_distinct_matrices() {
        for seed in 0..100u64 {
            let a = haar_random_unitary(4, &mut RngState::from_seed(2 * seed)).unwrap();
            let b = haar_random_unitary(4, &mut RngState::from_seed(2 * seed + 1)).unwrap();
            assert!(a.frobenius_distance(&b) > 1e-6, "seed pair {seed}");
        }
    }

    #[test]
    fn haar_first_column_phase_is_uniform_on_average() {
        // E[U_00] = 0 under the Haar measure; an unfixed QR phase convention
        // would bias the diagonal towards the positive real axis.
        let mut rng = RngState::from_seed(5);
        let mut mean = Complex64::ZERO;
        let draws = 4000;
        for _ in 0..draws {
            mean += haar_random_unitary(2, &mut rng).unwrap().get(0, 0);
        }
        mean /= draws as f64;
        assert!(mean.norm() < 0.05, "mean U_00 = {mean}");
    }

    #[test]
    fn rejects_non_unitary() {
        let m = vec![Complex64::ONE; 4];
        assert!(matches!(UnitaryMatrix::new(2, m), Err(Error::NonUnitary { .. })));
        assert!(UnitaryMatrix::new(2, vec![Complex64::ONE; 3]).is_err());
    }

    #[test]
    fn adjoint_inverts() {
        let u = haar_random_unitary(3, &mut RngState::from_seed(8)).unwrap();
        let prod = u.adjoint().compose(&u).unwrap();
        assert!(prod.frobenius_distance(&UnitaryMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn shift_cycles_basis() {
        let x = UnitaryMatrix::shift(3);
        let v = x.apply(&[Complex64::ONE, Complex64::ZERO, Complex64::ZERO]);
        assert_eq!(v[1], Complex64::ONE);
    }
}
