//! Explicit PKME states, the 4-qubit parameterized families, and reference
//! states used as positive and negative controls.
//!
//! Every constructor accumulates unit weights on the kets of its digit
//! pattern and normalizes explicitly, so no prefactor is hard-coded. Where the pattern uses `i ⊕ j` on qudits it means addition mod `d`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{checked_dim, haar_random_unitary, PureState, RngState, UnitaryMatrix};

/// Uniform superposition over `|pattern(v)>` for all `v` in `[0, d)^vars`.
fn uniform_over_pattern<F>(n: usize, d: usize, vars: usize, pattern: F) -> Result<PureState>
where
    F: Fn(&[usize]) -> Vec<usize>,
{
    let dim = checked_dim(n, d)?;
    let mut amplitudes = vec![Complex64::ZERO; dim];
    let mut v = vec![0usize; vars];
    loop {
        let digits = pattern(&v);
        debug_assert_eq!(digits.len(), n);
        let index = digits.iter().fold(0usize, |acc, &x| acc * d + x);
        amplitudes[index] += 1.0;

        let Some(p) = (0..vars).rev().find(|&p| v[p] + 1 < d) else {
            break;
        };
        v[p] += 1;
        v[p + 1..].iter_mut().for_each(|x| *x = 0);
    }
    PureState::normalized(n, d, amplitudes)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

/// `4k` qudits: `|i1..ik, i1..ik, ik+1..i2k, ik+1..i2k>` summed over all
/// digit tuples. Digits run over `0..d`.
pub fn pkme_4k(k: usize, d: usize) -> Result<PureState> {
    require(k >= 1, || "k must be at least 1".into())?;
    checked_dim(4 * k, d)?;
    uniform_over_pattern(4 * k, d, 2 * k, |v| {
        let (first, second) = v.split_at(k);
        [first, first, second, second].concat()
    })
}

/// Six qubits: `|i, i⊕j, j, l, j⊕l, i⊕j⊕l>`.
pub fn pkme_6qubit() -> Result<PureState> {
    uniform_over_pattern(6, 2, 3, |v| {
        let (i, j, l) = (v[0], v[1], v[2]);
        vec![i, i ^ j, j, l, j ^ l, i ^ j ^ l]
    })
}

/// Five qudits: `|i, i, j, j, i+j mod d>`.
pub fn pkme_5(d: usize) -> Result<PureState> {
    checked_dim(5, d)?;
    uniform_over_pattern(5, d, 2, |v| vec![v[0], v[0], v[1], v[1], (v[0] + v[1]) % d])
}

/// `4k + 1` qubits: the `pkme_4k(k, 2)` pattern followed by the parity of
/// all `2k` free bits.
pub fn pkme_4k1(k: usize) -> Result<PureState> {
    require(k >= 1, || "k must be at least 1".into())?;
    checked_dim(4 * k + 1, 2)?;
    uniform_over_pattern(4 * k + 1, 2, 2 * k, |v| {
        let (first, second) = v.split_at(k);
        let parity = v.iter().fold(0, |acc, x| acc ^ x);
        [first, first, second, second, &[parity]].concat()
    })
}

/// Seven qubits: `|i, j, l, j, l, i, i⊕j⊕l>`.
pub fn pkme_7() -> Result<PureState> {
    uniform_over_pattern(7, 2, 3, |v| {
        let (i, j, l) = (v[0], v[1], v[2]);
        vec![i, j, l, j, l, i, i ^ j ^ l]
    })
}

/// `2mk` qubits: `m` consecutive blocks, each a `k`-bit string written twice.
pub fn general_2mk(m: usize, k: usize) -> Result<PureState> {
    require(m >= 1 && k >= 1, || "m and k must be at least 1".into())?;
    checked_dim(2 * m * k, 2)?;
    uniform_over_pattern(2 * m * k, 2, m * k, |v| {
        v.chunks(k).flat_map(|block| block.iter().chain(block)).copied().collect()
    })
}

/// [`general_2mk`] with a final qubit holding the parity of all `mk` bits.
pub fn general_2mk1(m: usize, k: usize) -> Result<PureState> {
    require(m >= 1 && k >= 1, || "m and k must be at least 1".into())?;
    checked_dim(2 * m * k + 1, 2)?;
    uniform_over_pattern(2 * m * k + 1, 2, m * k, |v| {
        let parity = v.iter().fold(0, |acc, x| acc ^ x);
        v.chunks(k)
            .flat_map(|block| block.iter().chain(block))
            .copied()
            .chain(std::iter::once(parity))
            .collect()
    })
}

/// `(1/sqrt d) sum_i |i>^n`.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    require(n >= 2, || format!("GHZ needs at least 2 particles, got {n}"))?;
    checked_dim(n, d)?;
    uniform_over_pattern(n, d, 1, |v| vec![v[0]; n])
}

// Found by exhaustive search over the 2^15 sign patterns (first sign fixed)
// on the sixteen even-weight 5-bit kets; all ten 2-qubit marginals are I/4.
const AME5_SIGNS: [(u8, i8); 16] = [
    (0b00000, 1),
    (0b00011, -1),
    (0b00101, 1),
    (0b00110, -1),
    (0b01001, -1),
    (0b01010, 1),
    (0b01100, 1),
    (0b01111, -1),
    (0b10001, -1),
    (0b10010, -1),
    (0b10100, 1),
    (0b10111, 1),
    (0b11000, 1),
    (0b11011, 1),
    (0b11101, 1),
    (0b11110, 1),
];

/// A 5-qubit absolutely maximally entangled state with amplitudes ±1/4.
pub fn ame5_fixture() -> PureState {
    let mut amplitudes = vec![Complex64::ZERO; 32];
    for (ket, sign) in AME5_SIGNS {
        amplitudes[ket as usize] = Complex64::new(0.25 * sign as f64, 0.0);
    }
    PureState::new(5, 2, amplitudes).expect("fixture is normalized")
}

/// Which branch of the 4-qubit family a parameter set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyCase {
    /// `b = 0`: a 3x3 unitary block.
    Prime,
    /// `b != 0`: inner and outer 2x2 unitaries.
    DoublePrime,
    /// The intersection of both branches: inner 2x2 unitary only.
    Zero,
}

impl FamilyCase {
    pub const ALL: [FamilyCase; 3] = [FamilyCase::Prime, FamilyCase::DoublePrime, FamilyCase::Zero];
}

impl fmt::Display for FamilyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyCase::Prime => "prime",
            FamilyCase::DoublePrime => "double-prime",
            FamilyCase::Zero => "zero",
        })
    }
}

impl FromStr for FamilyCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prime" => Ok(FamilyCase::Prime),
            "double-prime" | "double_prime" => Ok(FamilyCase::DoublePrime),
            "zero" => Ok(FamilyCase::Zero),
            other => Err(Error::domain(format!("unknown family case '{other}'"))),
        }
    }
}

/// Parameters of the 4-qubit PKME family.
///
/// The coefficient matrix `V` has rows indexed by the digits of particles
/// (2, 4) and columns by the digits of particles (1, 3):
///
/// ```text
///          prime              double-prime
///     [1  0  0  0]           [a  0  0  b]
///     [0  c  e  f]           [0  c  e  0]
///     [0  g  h  p]           [0  g  h  0]
///     [0  r  w  y]           [q  0  0  y]
/// ```
///
/// with `block = [[c,e,f],[g,h,p],[r,w,y]]`, `inner = [[c,e],[g,h]]` and
/// `outer = [[a,b],[q,y]]`. The zero case is double-prime with `outer = I`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams4Qubit {
    Prime { block: UnitaryMatrix },
    DoublePrime { inner: UnitaryMatrix, outer: UnitaryMatrix },
    Zero { inner: UnitaryMatrix },
}

impl FamilyParams4Qubit {
    pub fn case(&self) -> FamilyCase {
        match self {
            FamilyParams4Qubit::Prime { .. } => FamilyCase::Prime,
            FamilyParams4Qubit::DoublePrime { .. } => FamilyCase::DoublePrime,
            FamilyParams4Qubit::Zero { .. } => FamilyCase::Zero,
        }
    }

    /// Haar-random parameters for `case`.
    pub fn random(case: FamilyCase, rng: &mut RngState) -> Result<Self> {
        Ok(match case {
            FamilyCase::Prime => FamilyParams4Qubit::Prime {
                block: haar_random_unitary(3, rng)?,
            },
            FamilyCase::DoublePrime => FamilyParams4Qubit::DoublePrime {
                inner: haar_random_unitary(2, rng)?,
                outer: haar_random_unitary(2, rng)?,
            },
            FamilyCase::Zero => FamilyParams4Qubit::Zero {
                inner: haar_random_unitary(2, rng)?,
            },
        })
    }

    /// The 4x4 matrix `V`, row-major.
    pub fn coefficient_matrix(&self) -> Result<[[Complex64; 4]; 4]> {
        let check = |u: &UnitaryMatrix, dim: usize, name: &str| {
            require(u.dim() == dim, || {
                format!("{name} matrix must be {dim}x{dim}, got {0}x{0}", u.dim())
            })
        };
        let z = Complex64::ZERO;
        let mut v = [[z; 4]; 4];
        let place_inner = |v: &mut [[Complex64; 4]; 4], inner: &UnitaryMatrix| {
            for r in 0..2 {
                for c in 0..2 {
                    v[r + 1][c + 1] = inner.get(r, c);
                }
            }
        };
        match self {
            FamilyParams4Qubit::Prime { block } => {
                check(block, 3, "prime-case block")?;
                v[0][0] = Complex64::ONE;
                for r in 0..3 {
                    for c in 0..3 {
                        v[r + 1][c + 1] = block.get(r, c);
                    }
                }
            }
            FamilyParams4Qubit::DoublePrime { inner, outer } => {
                check(inner, 2, "inner")?;
                check(outer, 2, "outer")?;
                place_inner(&mut v, inner);
                v[0][0] = outer.get(0, 0);
                v[0][3] = outer.get(0, 1);
                v[3][0] = outer.get(1, 0);
                v[3][3] = outer.get(1, 1);
            }
            FamilyParams4Qubit::Zero { inner } => {
                check(inner, 2, "inner")?;
                place_inner(&mut v, inner);
                v[0][0] = Complex64::ONE;
                v[3][3] = Complex64::ONE;
            }
        }
        Ok(v)
    }
}

/// Member of the 4-qubit PKME family in position order: the amplitude of
/// `|x1 x2 x3 x4>` is `V[(x2, x4)][(x1, x3)] / 2`.
pub fn four_qubit_family(params: &FamilyParams4Qubit) -> Result<PureState> {
    let v = params.coefficient_matrix()?;
    let mut amplitudes = vec![Complex64::ZERO; 16];
    for (index, amp) in amplitudes.iter_mut().enumerate() {
        let x = [(index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1];
        *amp = v[2 * x[1] + x[3]][2 * x[0] + x[2]] * 0.5;
    }
    PureState::new(4, 2, amplitudes)
}
