//! PKME / PME / AME decisions and per-subset diagnostics.
//!
//! Every check reduces the state onto one particle subset and measures the
//! Frobenius distance of the reduced state from `I / d^|subset|`. A PKME
//! check only looks at the full region A of each structure: if `rho_A` is
//! maximally mixed then so is every marginal of it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::structures::{cyclic_windows, enumerate_structures, four_partite_spec, valid_four_partite_ks, StructureSpec};
use crate::tensor::{deviation_from_maximally_mixed, partial_trace, PureState};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Largest number of subsets [`verify_ame`] will examine by default.
pub const DEFAULT_AME_BUDGET: u128 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Pkme,
    Pme,
    Ame,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pkme => "pkme",
            Mode::Pme => "pme",
            Mode::Ame => "ame",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pkme" => Ok(Mode::Pkme),
            "pme" => Ok(Mode::Pme),
            "ame" => Ok(Mode::Ame),
            other => Err(Error::domain(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parameters {
    /// Region A of every structure of a spec.
    Structures {
        n: usize,
        a_sizes: Vec<usize>,
        b_sizes: Vec<usize>,
    },
    /// Every cyclic window of `width` adjacent particles.
    Windows { width: usize },
    /// Every subset of `size` particles.
    Subsets { size: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Sorted particle positions whose reduced state was tested.
    pub subset: Vec<usize>,
    pub description: String,
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    mode: Mode,
    parameters: Parameters,
    tolerance: f64,
    verdict: bool,
    worst: Option<Check>,
    checks: Vec<Check>,
}

impl VerificationReport {
    fn new(mode: Mode, parameters: Parameters, tolerance: f64, checks: Vec<Check>) -> Self {
        let verdict = checks.iter().all(|c| c.passed);
        // first check attaining the maximum deviation
        let worst = checks
            .iter()
            .fold(None::<&Check>, |best, c| match best {
                Some(b) if b.deviation >= c.deviation => Some(b),
                _ => Some(c),
            })
            .cloned();
        Self {
            mode,
            parameters,
            tolerance,
            verdict,
            worst,
            checks,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn parameters(&self) -> &Parameters {
        &self.parameters
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn verdict(&self) -> bool {
        self.verdict
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn worst(&self) -> Option<&Check> {
        self.worst.as_ref()
    }

    pub fn max_deviation(&self) -> f64 {
        self.worst.as_ref().map_or(0.0, |c| c.deviation)
    }

    /// Check for the given (sorted) subset, if it was tested.
    pub fn check_for(&self, subset: &[usize]) -> Option<&Check> {
        self.checks.iter().find(|c| c.subset == subset)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = match &self.parameters {
            Parameters::Structures { n, a_sizes, b_sizes } => {
                let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!("n={n} A-sizes={{{}}} B-sizes={{{}}}", j(a_sizes), j(b_sizes))
            }
            Parameters::Windows { width } => format!("windows of {width} adjacent particles"),
            Parameters::Subsets { size } => format!("all subsets of {size} particles"),
        };
        writeln!(f, "mode: {}  {}  tol: {:e}", self.mode, params, self.tolerance)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<40} deviation={:.6e}  {}",
                c.description,
                c.deviation,
                if c.passed { "ok" } else { "FAIL" }
            )?;
        }
        if let Some(w) = &self.worst {
            writeln!(f, "worst: {}  deviation={:e}", w.description, w.deviation)?;
        }
        write!(f, "verdict: {}", if self.verdict { "PASS" } else { "FAIL" })
    }
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("tolerance must be positive and finite, got {tol}")))
    }
}

fn run_checks(state: &PureState, subsets: Vec<(Vec<usize>, String)>, tol: f64) -> Result<Vec<Check>> {
    subsets
        .into_par_iter()
        .map(|(subset, description)| {
            let rho = partial_trace(state, &subset)?;
            let deviation = deviation_from_maximally_mixed(&rho);
            Ok(Check {
                passed: deviation <= tol,
                subset,
                description,
                deviation,
            })
        })
        .collect()
}

fn set_label(prefix: &str, subset: &[usize]) -> String {
    let inner: Vec<String> = subset.iter().map(|x| x.to_string()).collect();
    format!("{prefix} {{{}}}", inner.join(","))
}

/// Region A of every structure of `spec` must be maximally mixed.
pub fn verify_pkme(state: &PureState, spec: &StructureSpec, tol: f64) -> Result<VerificationReport> {
    check_tolerance(tol)?;
    if state.n() != spec.n() {
        return Err(Error::domain(format!(
            "state has {} particles but the structures are defined for {}",
            state.n(),
            spec.n()
        )));
    }
    let subsets = enumerate_structures(spec)
        .into_iter()
        .map(|s| (s.region_a(), s.to_string()))
        .collect();
    let checks = run_checks(state, subsets, tol)?;
    let parameters = Parameters::Structures {
        n: spec.n(),
        a_sizes: spec.a_sizes().to_vec(),
        b_sizes: spec.b_sizes().to_vec(),
    };
    Ok(VerificationReport::new(Mode::Pkme, parameters, tol, checks))
}

/// Every cyclic window of `floor(n/2)` adjacent particles must be maximally mixed.
pub fn verify_pme(state: &PureState, tol: f64) -> Result<VerificationReport> {
    check_tolerance(tol)?;
    let n = state.n();
    if n < 2 {
        return Err(Error::domain("PME needs at least 2 particles"));
    }
    let width = n / 2;
    let subsets = cyclic_windows(n, width)
        .into_iter()
        .map(|w| {
            let label = set_label("window", &w);
            (w, label)
        })
        .collect();
    let checks = run_checks(state, subsets, tol)?;
    Ok(VerificationReport::new(Mode::Pme, Parameters::Windows { width }, tol, checks))
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Lexicographic `size`-subsets of `1..=n`.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=size).collect();
    if size == 0 || size > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(i) = (0..size).rev().find(|&i| current[i] < n - size + i + 1) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..size {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Every `floor(n/2)`-subset must be maximally mixed, using the default budget.
pub fn verify_ame(state: &PureState, tol: f64) -> Result<VerificationReport> {
    verify_ame_with_budget(state, tol, DEFAULT_AME_BUDGET)
}

/// As [`verify_ame`], refusing outright when more than `budget` subsets
/// would be needed.
pub fn verify_ame_with_budget(state: &PureState, tol: f64, budget: u128) -> Result<VerificationReport> {
    check_tolerance(tol)?;
    let n = state.n();
    if n < 2 {
        return Err(Error::domain("AME needs at least 2 particles"));
    }
    let size = n / 2;
    let required = binomial(n, size);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let subsets = combinations(n, size)
        .into_iter()
        .map(|s| {
            let label = set_label("subset", &s);
            (s, label)
        })
        .collect();
    let checks = run_checks(state, subsets, tol)?;
    Ok(VerificationReport::new(Mode::Ame, Parameters::Subsets { size }, tol, checks))
}

/// Verdicts for all modes at once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    /// `None` when the AME check would exceed its subset budget.
    pub ame: Option<bool>,
    pub pme: bool,
    /// Four-partite PKME verdict for every valid `k`.
    pub pkme: BTreeMap<usize, bool>,
    /// Verdict for an additional user-supplied spec.
    pub general: Option<GeneralVerdict>,
    /// False only if AME passed while some weaker condition failed.
    pub implications_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralVerdict {
    pub spec: String,
    pub verdict: bool,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "true" } else { "false" };
        match self.ame {
            Some(v) => writeln!(f, "AME: {}", yn(v))?,
            None => writeln!(f, "AME: skipped (subset budget exceeded)")?,
        }
        writeln!(f, "PME: {}", yn(self.pme))?;
        for (k, v) in &self.pkme {
            writeln!(f, "PKME(k={k}): {}", yn(*v))?;
        }
        if let Some(g) = &self.general {
            writeln!(f, "PKME({}): {}", g.spec, yn(g.verdict))?;
        }
        write!(f, "implications consistent: {}", yn(self.implications_hold))
    }
}

pub fn classify(state: &PureState, tol: f64) -> Result<Classification> {
    classify_with(state, tol, None, DEFAULT_AME_BUDGET)
}

pub fn classify_with(
    state: &PureState,
    tol: f64,
    general: Option<&StructureSpec>,
    ame_budget: u128,
) -> Result<Classification> {
    check_tolerance(tol)?;
    let n = state.n();
    let ame = match verify_ame_with_budget(state, tol, ame_budget) {
        Ok(r) => Some(r.verdict()),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let pme = verify_pme(state, tol)?.verdict();
    let mut pkme = BTreeMap::new();
    for k in valid_four_partite_ks(n) {
        let spec = four_partite_spec(n, k)?;
        pkme.insert(k, verify_pkme(state, &spec, tol)?.verdict());
    }
    let general = general
        .map(|spec| -> Result<GeneralVerdict> {
            Ok(GeneralVerdict {
                spec: spec.to_string(),
                verdict: verify_pkme(state, spec, tol)?.verdict(),
            })
        })
        .transpose()?;
    let weaker_all_pass =
        pme && pkme.values().all(|&v| v) && general.as_ref().is_none_or(|g| g.verdict);
    let implications_hold = ame != Some(true) || weaker_all_pass;
    Ok(Classification {
        ame,
        pme,
        pkme,
        general,
        implications_hold,
    })
}
