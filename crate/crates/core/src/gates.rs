//! Controlled operators `Λ_{s,t}(U)` and pipelines of them.
//!
//! `Λ_{s,t}(U) |i>_s |j>_t = |i>_s U_i |j>_t`: the digit on the control site
//! selects which of the `d` branch unitaries acts on the target site.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{haar_random_unitary, PureState, RngState, UnitaryMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct ControlledOp {
    control: usize,
    target: usize,
    branches: Vec<UnitaryMatrix>,
}

impl ControlledOp {
    /// `branches[i]` acts on the target when the control digit is `i`, so
    /// there must be exactly `d` branches, each `d x d`.
    pub fn new(control: usize, target: usize, branches: Vec<UnitaryMatrix>) -> Result<Self> {
        if control == 0 || target == 0 {
            return Err(Error::domain("sites are 1-based"));
        }
        if control == target {
            return Err(Error::domain(format!(
                "control and target must differ, both are {control}"
            )));
        }
        let d = branches.len();
        if d < 2 {
            return Err(Error::domain(format!("need one branch per control digit (d >= 2), got {d}")));
        }
        if let Some((i, u)) = branches.iter().enumerate().find(|(_, u)| u.dim() != d) {
            return Err(Error::domain(format!(
                "branch {i} is {0}x{0}, expected {d}x{d}",
                u.dim()
            )));
        }
        Ok(Self {
            control,
            target,
            branches,
        })
    }

    /// Same branch on every control digit, i.e. an uncontrolled local unitary.
    pub fn uniform(control: usize, target: usize, d: usize, u: UnitaryMatrix) -> Result<Self> {
        Self::new(control, target, vec![u; d])
    }

    /// Haar-random branches.
    pub fn random(control: usize, target: usize, d: usize, rng: &mut RngState) -> Result<Self> {
        let branches = (0..d)
            .map(|_| haar_random_unitary(d, rng))
            .collect::<Result<Vec<_>>>()?;
        Self::new(control, target, branches)
    }

    pub fn control(&self) -> usize {
        self.control
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn d(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[UnitaryMatrix] {
        &self.branches
    }

    pub fn inverse(&self) -> Self {
        Self {
            control: self.control,
            target: self.target,
            branches: self.branches.iter().map(UnitaryMatrix::adjoint).collect(),
        }
    }
}

impl fmt::Display for ControlledOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ_{{{},{}}}", self.control, self.target)
    }
}

/// Applies `op` to `state`.
///
/// Amplitudes are visited in groups that share every digit except the
/// target's; each group is multiplied by the branch chosen by its control
/// digit. Cost is `O(d^(n+1))`.
pub fn apply_controlled(state: &PureState, op: &ControlledOp) -> Result<PureState> {
    let n = state.n();
    let d = state.d();
    if op.control > n || op.target > n {
        return Err(Error::domain(format!(
            "{op} references a site outside 1..={n}"
        )));
    }
    if op.d() != d {
        return Err(Error::domain(format!(
            "{op} has {}-dimensional branches but the state has d = {d}",
            op.d()
        )));
    }
    let control_stride = d.pow((n - op.control) as u32);
    let target_stride = d.pow((n - op.target) as u32);
    let block = target_stride * d;

    let mut out = state.amplitudes().to_vec();
    let mut group = vec![Complex64::ZERO; d];
    for hi in (0..out.len()).step_by(block) {
        for lo in 0..target_stride {
            let base = hi + lo;
            let branch = &op.branches[(base / control_stride) % d];
            for (j, slot) in group.iter_mut().enumerate() {
                *slot = out[base + j * target_stride];
            }
            for r in 0..d {
                let row = &branch.entries()[r * d..(r + 1) * d];
                out[base + r * target_stride] = row.iter().zip(&group).map(|(u, x)| u * x).sum();
            }
        }
    }
    Ok(PureState::from_parts_unchecked(n, d, out))
}

/// Applies a single-site unitary to `position`.
pub fn apply_local(state: &PureState, position: usize, u: &UnitaryMatrix) -> Result<PureState> {
    let n = state.n();
    let d = state.d();
    if position == 0 || position > n {
        return Err(Error::domain(format!("position {position} is outside 1..={n}")));
    }
    if u.dim() != d {
        return Err(Error::domain(format!(
            "unitary is {0}x{0} but the state has d = {d}",
            u.dim()
        )));
    }
    let stride = d.pow((n - position) as u32);
    let mut out = state.amplitudes().to_vec();
    let mut group = vec![Complex64::ZERO; d];
    for hi in (0..out.len()).step_by(stride * d) {
        for lo in 0..stride {
            let base = hi + lo;
            for (j, slot) in group.iter_mut().enumerate() {
                *slot = out[base + j * stride];
            }
            for (r, v) in u.apply(&group).into_iter().enumerate() {
                out[base + r * stride] = v;
            }
        }
    }
    Ok(PureState::from_parts_unchecked(n, d, out))
}

/// Controlled operators in application order: `ops()[0]` acts first.
///
/// A written operator product `Λ_a Λ_b Λ_c |ψ>` acts right to left; build it
/// with [`Pipeline::from_operator_product`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Pipeline {
    ops: Vec<ControlledOp>,
}

impl Pipeline {
    pub fn new(ops: Vec<ControlledOp>) -> Self {
        Self { ops }
    }

    /// Takes operators in the order they are written in a product, so the
    /// last one listed is applied first.
    pub fn from_operator_product(mut written: Vec<ControlledOp>) -> Self {
        written.reverse();
        Self { ops: written }
    }

    pub fn ops(&self) -> &[ControlledOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `(control, target)` pairs in application order.
    pub fn sites(&self) -> Vec<(usize, usize)> {
        self.ops.iter().map(|op| (op.control, op.target)).collect()
    }

    pub fn inverse(&self) -> Self {
        Self {
            ops: self.ops.iter().rev().map(ControlledOp::inverse).collect(),
        }
    }
}

pub fn apply_pipeline(state: &PureState, pipeline: &Pipeline) -> Result<PureState> {
    let mut current = state.clone();
    for op in &pipeline.ops {
        current = apply_controlled(&current, op)?;
    }
    Ok(current)
}

/// The named pipelines that map known PKME states to new ones.
///
/// Site patterns, written as operator products with `U_1` leftmost:
///
/// * `Even4k(k)` on `4k` sites: `Λ_{k+1,k+2} ... Λ_{2k-1,2k} Λ_{2k,3k+1}
///   Λ_{3k+1,3k+2} ... Λ_{4k-1,4k}` with branches `U_1 .. U_{2k-1}`.
/// * `Odd4k1(k)` on `4k+1` sites: the same, continuing to `Λ_{4k,4k+1}`,
///   with branches `U_1 .. U_{2k}`.
/// * `*Reversed` variants write the same factors in the opposite order.
/// * The fixed-size variants fix `k` (eight qudits: `k = 2`, five qudits: `k = 1`)
///   and choose an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedPipeline {
    Even4k(usize),
    Even4kReversed(usize),
    Odd4k1(usize),
    Odd4k1Reversed(usize),
    /// `Λ_{3,4}(U1) Λ_{4,7}(U2) Λ_{7,8}(U3)`
    EightQuditTailFirst,
    /// `Λ_{7,8}(U3) Λ_{4,7}(U2) Λ_{3,4}(U1)`
    EightQuditHeadFirst,
    /// `Λ_{2,4}(U1) Λ_{4,5}(U2)`
    FiveQuditTailFirst,
    /// `Λ_{4,5}(U2) Λ_{2,4}(U1)`
    FiveQuditHeadFirst,
}

impl NamedPipeline {
    /// `(control, target)` pairs for `U_1, U_2, ...` in index order.
    pub fn indexed_sites(&self) -> Result<Vec<(usize, usize)>> {
        let chain = |k: usize, last: usize| -> Result<Vec<(usize, usize)>> {
            if k == 0 {
                return Err(Error::domain("k must be at least 1"));
            }
            let mut sites: Vec<(usize, usize)> = (k + 1..2 * k).map(|p| (p, p + 1)).collect();
            sites.push((2 * k, 3 * k + 1));
            sites.extend((3 * k + 1..last).map(|p| (p, p + 1)));
            Ok(sites)
        };
        match *self {
            NamedPipeline::Even4k(k) | NamedPipeline::Even4kReversed(k) => chain(k, 4 * k),
            NamedPipeline::Odd4k1(k) | NamedPipeline::Odd4k1Reversed(k) => chain(k, 4 * k + 1),
            NamedPipeline::EightQuditTailFirst | NamedPipeline::EightQuditHeadFirst => chain(2, 8),
            NamedPipeline::FiveQuditTailFirst | NamedPipeline::FiveQuditHeadFirst => chain(1, 5),
        }
    }

    /// Number of branch families `U_i` the pipeline takes.
    pub fn arity(&self) -> Result<usize> {
        Ok(self.indexed_sites()?.len())
    }

    /// Number of sites of the state the pipeline acts on.
    pub fn sites_required(&self) -> Result<usize> {
        Ok(match *self {
            NamedPipeline::Even4k(k) | NamedPipeline::Even4kReversed(k) => 4 * k,
            NamedPipeline::Odd4k1(k) | NamedPipeline::Odd4k1Reversed(k) => 4 * k + 1,
            NamedPipeline::EightQuditTailFirst | NamedPipeline::EightQuditHeadFirst => 8,
            NamedPipeline::FiveQuditTailFirst | NamedPipeline::FiveQuditHeadFirst => 5,
        })
    }

    /// Whether `U_1` is written leftmost (and so applied last).
    fn written_in_index_order(&self) -> bool {
        matches!(
            self,
            NamedPipeline::Even4k(_)
                | NamedPipeline::Odd4k1(_)
                | NamedPipeline::EightQuditTailFirst
                | NamedPipeline::FiveQuditTailFirst
        )
    }

    /// Pairs each `U_i` (as a branch family of `d` unitaries) with its sites.
    pub fn build(&self, branch_families: Vec<Vec<UnitaryMatrix>>) -> Result<Pipeline> {
        let sites = self.indexed_sites()?;
        if branch_families.len() != sites.len() {
            return Err(Error::domain(format!(
                "{self} takes {} branch families, got {}",
                sites.len(),
                branch_families.len()
            )));
        }
        let mut written = sites
            .into_iter()
            .zip(branch_families)
            .map(|((s, t), branches)| ControlledOp::new(s, t, branches))
            .collect::<Result<Vec<_>>>()?;
        if !self.written_in_index_order() {
            written.reverse();
        }
        Ok(Pipeline::from_operator_product(written))
    }

    /// Haar-random branch families drawn in index order `U_1, U_2, ...`.
    pub fn random_branches(&self, d: usize, rng: &mut RngState) -> Result<Vec<Vec<UnitaryMatrix>>> {
        (0..self.arity()?)
            .map(|_| (0..d).map(|_| haar_random_unitary(d, rng)).collect())
            .collect()
    }
}

/// Named pipeline with the given branch families (`U_1, U_2, ...`).
pub fn named_pipeline(
    kind: NamedPipeline,
    branch_families: Vec<Vec<UnitaryMatrix>>,
) -> Result<Pipeline> {
    kind.build(branch_families)
}

impl fmt::Display for NamedPipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedPipeline::Even4k(k) => write!(f, "even_4k({k})"),
            NamedPipeline::Even4kReversed(k) => write!(f, "even_4k_reversed({k})"),
            NamedPipeline::Odd4k1(k) => write!(f, "odd_4k1({k})"),
            NamedPipeline::Odd4k1Reversed(k) => write!(f, "odd_4k1_reversed({k})"),
            NamedPipeline::EightQuditTailFirst => f.write_str("eight_qudit_tail_first"),
            NamedPipeline::EightQuditHeadFirst => f.write_str("eight_qudit_head_first"),
            NamedPipeline::FiveQuditTailFirst => f.write_str("five_qudit_tail_first"),
            NamedPipeline::FiveQuditHeadFirst => f.write_str("five_qudit_head_first"),
        }
    }
}

impl FromStr for NamedPipeline {
    type Err = Error;

    /// Accepts `eight_qudit_tail_first`-style names and `even_4k(2)` / `even_4k:2`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, k) = match s.find(['(', ':']) {
            Some(i) => {
                let arg = s[i + 1..].trim_end_matches(')');
                let k = arg
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("bad k in pipeline name '{s}'")))?;
                (&s[..i], Some(k))
            }
            None => (s, None),
        };
        let need_k = || k.ok_or_else(|| Error::domain(format!("pipeline '{name}' needs a k, e.g. {name}(1)")));
        match name {
            "even_4k" => Ok(NamedPipeline::Even4k(need_k()?)),
            "even_4k_reversed" => Ok(NamedPipeline::Even4kReversed(need_k()?)),
            "odd_4k1" => Ok(NamedPipeline::Odd4k1(need_k()?)),
            "odd_4k1_reversed" => Ok(NamedPipeline::Odd4k1Reversed(need_k()?)),
            "eight_qudit_tail_first" => Ok(NamedPipeline::EightQuditTailFirst),
            "eight_qudit_head_first" => Ok(NamedPipeline::EightQuditHeadFirst),
            "five_qudit_tail_first" => Ok(NamedPipeline::FiveQuditTailFirst),
            "five_qudit_head_first" => Ok(NamedPipeline::FiveQuditHeadFirst),
            _ => Err(Error::domain(format!("unknown pipeline '{s}'"))),
        }
    }
}
