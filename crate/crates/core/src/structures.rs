//! Planar two-region structures: partitions of a circle of `n` particles
//! into alternating contiguous arcs `A1, B1, A2, B2, ..., Am, Bm`.
//!
//! A structure is identified by its region-A position set. Region B is the
//! complement, and the parts of each region are recovered as maximal cyclic
//! runs.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Part sizes for a family of structures on `n` particles.
///
/// Both size lists are multisets; they are stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureSpec {
    n: usize,
    a_sizes: Vec<usize>,
    b_sizes: Vec<usize>,
}

impl StructureSpec {
    pub fn new(n: usize, mut a_sizes: Vec<usize>, mut b_sizes: Vec<usize>) -> Result<Self> {
        let m = a_sizes.len();
        if m != b_sizes.len() {
            return Err(Error::domain(format!(
                "regions need the same number of parts, got {} A-parts and {} B-parts",
                m,
                b_sizes.len()
            )));
        }
        if m < 2 {
            return Err(Error::domain(format!("need at least 2 parts per region, got {m}")));
        }
        if a_sizes.iter().chain(&b_sizes).any(|&s| s == 0) {
            return Err(Error::domain("every part must contain at least one particle"));
        }
        let half = n / 2;
        let a_total: usize = a_sizes.iter().sum();
        let b_total: usize = b_sizes.iter().sum();
        if a_total != half || b_total != n - half {
            return Err(Error::domain(format!(
                "region sizes {a_total} + {b_total} do not match n = {n} (expected {half} + {})",
                n - half
            )));
        }
        a_sizes.sort_unstable();
        b_sizes.sort_unstable();
        Ok(Self { n, a_sizes, b_sizes })
    }

    /// Every part of both regions has `k` particles (`n = 2mk`).
    pub fn uniform(m: usize, k: usize) -> Result<Self> {
        Self::new(2 * m * k, vec![k; m], vec![k; m])
    }

    /// As [`StructureSpec::uniform`] with one B-part enlarged to `k + 1`
    /// (`n = 2mk + 1`).
    pub fn uniform_odd(m: usize, k: usize) -> Result<Self> {
        let mut b = vec![k; m];
        if let Some(last) = b.last_mut() {
            *last += 1;
        }
        Self::new(2 * m * k + 1, vec![k; m], b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parts per region.
    pub fn m(&self) -> usize {
        self.a_sizes.len()
    }

    pub fn a_sizes(&self) -> &[usize] {
        &self.a_sizes
    }

    pub fn b_sizes(&self) -> &[usize] {
        &self.b_sizes
    }
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "n={} A={{{}}} B={{{}}}",
            self.n,
            join(&self.a_sizes),
            join(&self.b_sizes)
        )
    }
}

/// Four-part spec: region A split `{k, floor(n/2) - k}`, region B split
/// `{k, n - floor(n/2) - k}`.
pub fn four_partite_spec(n: usize, k: usize) -> Result<StructureSpec> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let half = n / 2;
    if half <= k {
        return Err(Error::domain(format!(
            "second part of region A would be empty: floor({n}/2) - {k} = {}",
            half as isize - k as isize
        )));
    }
    if n - half <= k {
        return Err(Error::domain(format!(
            "second part of region B would be empty: {n} - floor({n}/2) - {k} = {}",
            (n - half) as isize - k as isize
        )));
    }
    StructureSpec::new(n, vec![k, half - k], vec![k, n - half - k])
}

/// Values of `k` for which [`four_partite_spec`] is defined.
pub fn valid_four_partite_ks(n: usize) -> Vec<usize> {
    (1..n).filter(|&k| four_partite_spec(n, k).is_ok()).collect()
}

/// One structure. Parts hold their positions sorted ascending; parts within a
/// region are ordered by smallest position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarStructure {
    n: usize,
    a_parts: Vec<Vec<usize>>,
    b_parts: Vec<Vec<usize>>,
}

impl PlanarStructure {
    /// Recovers the structure whose region A is `region_a`.
    pub fn from_region_a(n: usize, region_a: &[usize]) -> Result<Self> {
        let mut in_a = vec![false; n];
        for &p in region_a {
            if p == 0 || p > n {
                return Err(Error::domain(format!("position {p} is outside 1..={n}")));
            }
            if in_a[p - 1] {
                return Err(Error::domain(format!("position {p} appears more than once")));
            }
            in_a[p - 1] = true;
        }
        if region_a.is_empty() || region_a.len() == n {
            return Err(Error::domain("both regions must be nonempty"));
        }
        let a_parts = cyclic_runs(&in_a, true);
        let b_parts = cyclic_runs(&in_a, false);
        Ok(Self { n, a_parts, b_parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_parts(&self) -> &[Vec<usize>] {
        &self.a_parts
    }

    pub fn b_parts(&self) -> &[Vec<usize>] {
        &self.b_parts
    }

    pub fn region_a(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.a_parts.concat();
        v.sort_unstable();
        v
    }

    pub fn region_b(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.b_parts.concat();
        v.sort_unstable();
        v
    }

    /// Shifts every position by `steps` around the circle.
    pub fn rotated(&self, steps: usize) -> Self {
        let region: Vec<usize> = self
            .region_a()
            .iter()
            .map(|&p| (p - 1 + steps) % self.n + 1)
            .collect();
        Self::from_region_a(self.n, &region).expect("rotation preserves validity")
    }

    /// Checks the structural invariants: the parts partition `1..=n`, each
    /// part is a cyclic arc, and arcs alternate A, B, A, B around the circle.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let mut owner = vec![None; n];
        for (label, parts) in [('A', &self.a_parts), ('B', &self.b_parts)] {
            for (i, part) in parts.iter().enumerate() {
                if part.is_empty() {
                    return Err(Error::domain(format!("part {label}{} is empty", i + 1)));
                }
                for &p in part {
                    if p == 0 || p > n {
                        return Err(Error::domain(format!("position {p} is outside 1..={n}")));
                    }
                    if owner[p - 1].is_some() {
                        return Err(Error::domain(format!("position {p} is in two parts")));
                    }
                    owner[p - 1] = Some((label, i));
                }
                if !is_cyclic_arc(n, part) {
                    return Err(Error::domain(format!("part {label}{} is not contiguous", i + 1)));
                }
            }
        }
        if owner.iter().any(Option::is_none) {
            return Err(Error::domain("parts do not cover every position"));
        }
        if self.a_parts.len() != self.b_parts.len() {
            return Err(Error::domain("regions have different part counts"));
        }
        // Each boundary between neighbours must change region; otherwise two
        // parts of one region touch.
        let boundaries: Vec<usize> = (0..n).filter(|&i| owner[i] != owner[(i + 1) % n]).collect();
        for &i in &boundaries {
            let here = owner[i].map(|o| o.0);
            let next = owner[(i + 1) % n].map(|o| o.0);
            if here == next {
                return Err(Error::domain(format!(
                    "positions {} and {} are adjacent parts of the same region",
                    i + 1,
                    (i + 1) % n + 1
                )));
            }
        }
        if boundaries.len() != 2 * self.a_parts.len() {
            return Err(Error::domain("arcs do not alternate between regions"));
        }
        Ok(())
    }

    /// Whether the part sizes agree with `spec`.
    pub fn matches(&self, spec: &StructureSpec) -> bool {
        let sizes = |parts: &[Vec<usize>]| {
            let mut s: Vec<usize> = parts.iter().map(Vec::len).collect();
            s.sort_unstable();
            s
        };
        self.n == spec.n()
            && sizes(&self.a_parts) == spec.a_sizes()
            && sizes(&self.b_parts) == spec.b_sizes()
    }
}

impl fmt::Display for PlanarStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = |ps: &[Vec<usize>]| {
            ps.iter()
                .map(|p| {
                    let inner: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    format!("{{{}}}", inner.join(","))
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "A: {} B: {}", parts(&self.a_parts), parts(&self.b_parts))
    }
}

fn cyclic_runs(in_a: &[bool], want: bool) -> Vec<Vec<usize>> {
    let n = in_a.len();
    // start scanning just after a region change so no run wraps the scan origin
    let start = (0..n).find(|&i| in_a[i] != in_a[(i + n - 1) % n]).unwrap_or(0);
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for step in 0..n {
        let i = (start + step) % n;
        if in_a[i] == want {
            current.push(i + 1);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    for run in &mut runs {
        run.sort_unstable();
    }
    runs.sort();
    runs
}

fn is_cyclic_arc(n: usize, part: &[usize]) -> bool {
    let mut member = vec![false; n];
    for &p in part {
        member[p - 1] = true;
    }
    if part.len() == n {
        return true;
    }
    // an arc has exactly one position whose predecessor is outside it
    (0..n).filter(|&i| member[i] && !member[(i + n - 1) % n]).count() == 1
}

/// Distinct permutations of a sorted slice, in lexicographic order.
fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut current = sorted.to_vec();
    current.sort_unstable();
    let mut out = vec![current.clone()];
    loop {
        // standard next-permutation step
        let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// All structures matching `spec`, ordered by region-A position set
/// (smallest element first, then lexicographically).
pub fn enumerate_structures(spec: &StructureSpec) -> Vec<PlanarStructure> {
    let n = spec.n();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a_order in distinct_permutations(spec.a_sizes()) {
        for b_order in distinct_permutations(spec.b_sizes()) {
            for rotation in 0..n {
                let mut pos = rotation;
                let mut region_a = Vec::with_capacity(n / 2);
                for (&a, &b) in a_order.iter().zip(&b_order) {
                    for _ in 0..a {
                        region_a.push(pos % n + 1);
                        pos += 1;
                    }
                    pos += b;
                }
                region_a.sort_unstable();
                seen.insert(region_a);
            }
        }
    }
    seen.into_iter()
        .map(|a| PlanarStructure::from_region_a(n, &a).expect("generated region is valid"))
        .collect()
}

pub fn structure_count(spec: &StructureSpec) -> usize {
    enumerate_structures(spec).len()
}

/// The `n` cyclic windows of `width` adjacent particles, each sorted.
pub fn cyclic_windows(n: usize, width: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|start| {
            let mut w: Vec<usize> = (0..width).map(|j| (start + j) % n + 1).collect();
            w.sort_unstable();
            w
        })
        .collect()
}
