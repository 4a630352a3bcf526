//! Independent oracles shared by the integration tests.

use num_complex::Complex64;
use pkme::tensor::PureState;

fn digits_of(mut index: usize, n: usize, d: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for p in (0..n).rev() {
        digits[p] = index % d;
        index /= d;
    }
    digits
}

/// `rho[a][a'] = sum_{i,j} psi_i conj(psi_j)` over index pairs whose traced
/// digits agree and whose kept digits spell `a` and `a'`.
pub fn brute_force_reduced(state: &PureState, keep: &[usize]) -> Vec<Vec<Complex64>> {
    let (n, d) = (state.n(), state.d());
    let dk = d.pow(keep.len() as u32);
    let mut rho = vec![vec![Complex64::new(0.0, 0.0); dk]; dk];
    let amps = state.amplitudes();
    let kept_index = |digits: &[usize]| keep.iter().fold(0, |acc, &p| acc * d + digits[p - 1]);
    let traced = |digits: &[usize]| -> Vec<usize> {
        (1..=n).filter(|p| !keep.contains(p)).map(|p| digits[p - 1]).collect()
    };
    for (i, &psi_i) in amps.iter().enumerate() {
        let di = digits_of(i, n, d);
        for (j, &psi_j) in amps.iter().enumerate() {
            let dj = digits_of(j, n, d);
            if traced(&di) == traced(&dj) {
                rho[kept_index(&di)][kept_index(&dj)] += psi_i * psi_j.conj();
            }
        }
    }
    rho
}

/// Largest entrywise modulus of `computed - oracle`.
pub fn max_entry_gap(computed: &pkme::tensor::DensityMatrix, oracle: &[Vec<Complex64>]) -> f64 {
    let mut gap = 0.0f64;
    for (r, row) in oracle.iter().enumerate() {
        for (c, &value) in row.iter().enumerate() {
            gap = gap.max((computed.get(r, c) - value).norm());
        }
    }
    gap
}
