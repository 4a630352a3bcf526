use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{validate_positions, PureState, ALGEBRAIC_TOL, EIGEN_DIM_LIMIT, UNITARITY_TOL};
use crate::error::{Error, Result};

/// Reduced state of the particles in `positions`, row-major.
///
/// Rows and columns are indexed by the digits of the retained particles in
/// the order given by `positions` (first listed = most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    positions: Vec<usize>,
    d: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Wraps explicit entries. Only the shape is checked here; use
    /// [`DensityMatrix::check_invariants`] for the physical constraints.
    pub fn from_entries(positions: Vec<usize>, d: usize, entries: Vec<Complex64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::domain("a density matrix needs at least one particle"));
        }
        let dim = d.pow(positions.len() as u32);
        if entries.len() != dim * dim {
            return Err(Error::domain(format!(
                "{} retained qudits of dimension {d} need {} entries, got {}",
                positions.len(),
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { positions, d, entries })
    }

    pub fn from_real_diagonal(positions: Vec<usize>, d: usize, diagonal: &[f64]) -> Result<Self> {
        let dim = diagonal.len();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for (i, &x) in diagonal.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(x, 0.0);
        }
        Self::from_entries(positions, d, entries)
    }

    pub fn maximally_mixed(positions: Vec<usize>, d: usize) -> Result<Self> {
        let dim = d.pow(positions.len() as u32);
        Self::from_real_diagonal(positions, d, &vec![1.0 / dim as f64; dim])
    }

    pub fn k(&self) -> usize {
        self.positions.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.positions.len() as u32)
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i]).sum()
    }

    /// `max |rho - rho^dag|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                let diff = self.entries[r * dim + c] - self.entries[c * dim + r].conj();
                worst = worst.max(diff.norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue, or `None` above [`EIGEN_DIM_LIMIT`].
    pub fn min_eigenvalue(&self) -> Option<f64> {
        let dim = self.dim();
        if dim > EIGEN_DIM_LIMIT {
            return None;
        }
        let m = DMatrix::from_row_slice(dim, dim, &self.entries);
        let eig = SymmetricEigen::new(m);
        eig.eigenvalues.iter().copied().reduce(f64::min)
    }

    /// Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10
    /// (the last only when the dimension allows an eigendecomposition).
    pub fn check_invariants(&self) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > ALGEBRAIC_TOL {
            return Err(Error::domain(format!("not Hermitian: defect {herm:e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > ALGEBRAIC_TOL {
            return Err(Error::domain(format!("trace {tr} is not 1")));
        }
        if let Some(lambda) = self.min_eigenvalue() {
            if lambda < -UNITARITY_TOL {
                return Err(Error::domain(format!("negative eigenvalue {lambda:e}")));
            }
        }
        Ok(())
    }

    /// Traces out every retained particle not in `keep`.
    ///
    /// `keep` lists global particle positions, all of which must already be
    /// retained by `self`; the result follows the order of `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::domain("position set must be nonempty"));
        }
        let d = self.d;
        let k = self.k();
        let mut slots = Vec::with_capacity(keep.len());
        for &p in keep {
            let slot = self
                .positions
                .iter()
                .position(|&q| q == p)
                .ok_or_else(|| Error::domain(format!("position {p} is not retained")))?;
            if slots.contains(&slot) {
                return Err(Error::domain(format!("position {p} appears more than once")));
            }
            slots.push(slot);
        }
        let rest: Vec<usize> = (0..k).filter(|s| !slots.contains(s)).collect();

        // weight of each slot in the parent index
        let weight: Vec<usize> = (0..k).map(|s| d.pow((k - 1 - s) as u32)).collect();
        let offsets = |which: &[usize]| -> Vec<usize> {
            let m = which.len();
            (0..d.pow(m as u32))
                .map(|mut idx| {
                    let mut off = 0;
                    for j in (0..m).rev() {
                        off += (idx % d) * weight[which[j]];
                        idx /= d;
                    }
                    off
                })
                .collect()
        };
        let kept_off = offsets(&slots);
        let rest_off = offsets(&rest);

        let parent_dim = self.dim();
        let dim = kept_off.len();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for (r, &ro) in kept_off.iter().enumerate() {
            for (c, &co) in kept_off.iter().enumerate() {
                entries[r * dim + c] = rest_off
                    .iter()
                    .map(|&t| self.entries[(ro + t) * parent_dim + co + t])
                    .sum();
            }
        }
        Ok(DensityMatrix {
            positions: keep.to_vec(),
            d,
            entries,
        })
    }
}

/// Reduced density matrix of `keep` for the pure state `state`.
///
/// Builds the `d^|keep| x d^|rest|` reshaping `M` of the amplitude vector in
/// one pass and returns `M M^dag`, filling only the upper triangle and
/// mirroring so the output is exactly Hermitian.
pub fn partial_trace(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.n();
    let d = state.d();
    validate_positions(n, keep)?;

    let rest: Vec<usize> = (1..=n).filter(|p| !keep.contains(p)).collect();
    let mut keep_weight = vec![0usize; n];
    let mut rest_weight = vec![0usize; n];
    for (j, &p) in keep.iter().enumerate() {
        keep_weight[p - 1] = d.pow((keep.len() - 1 - j) as u32);
    }
    for (j, &p) in rest.iter().enumerate() {
        rest_weight[p - 1] = d.pow((rest.len() - 1 - j) as u32);
    }
    let keep_dim = d.pow(keep.len() as u32);
    let rest_dim = d.pow(rest.len() as u32);

    let mut reshaped = vec![Complex64::ZERO; keep_dim * rest_dim];
    let mut digits = vec![0usize; n];
    let (mut ki, mut ri) = (0usize, 0usize);
    for &amp in state.amplitudes() {
        reshaped[ki * rest_dim + ri] = amp;
        // odometer increment, least significant particle last
        for p in (0..n).rev() {
            if digits[p] + 1 < d {
                digits[p] += 1;
                ki += keep_weight[p];
                ri += rest_weight[p];
                break;
            }
            ki -= (d - 1) * keep_weight[p];
            ri -= (d - 1) * rest_weight[p];
            digits[p] = 0;
        }
    }

    let mut entries = vec![Complex64::ZERO; keep_dim * keep_dim];
    for r in 0..keep_dim {
        let row_r = &reshaped[r * rest_dim..(r + 1) * rest_dim];
        for c in r..keep_dim {
            let row_c = &reshaped[c * rest_dim..(c + 1) * rest_dim];
            let s: Complex64 = row_r.iter().zip(row_c).map(|(a, b)| a * b.conj()).sum();
            entries[r * keep_dim + c] = s;
            entries[c * keep_dim + r] = s.conj();
        }
    }
    Ok(DensityMatrix {
        positions: keep.to_vec(),
        d,
        entries,
    })
}

/// `||rho - I / d^k||_F`.
pub fn deviation_from_maximally_mixed(rho: &DensityMatrix) -> f64 {
    let dim = rho.dim();
    let target = 1.0 / dim as f64;
    let mut sum = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            let mut e = rho.entries[r * dim + c];
            if r == c {
                e -= target;
            }
            sum += e.norm_sqr();
        }
    }
    sum.sqrt()
}
