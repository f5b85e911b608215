//! Mode-wise relation checks over an abstract backend, and their reports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scalar::{binomial, Scalar};

use super::EngineError;

/// Something that can apply operator words to vectors exactly.
pub trait Backend: Sync {
    type Op: Clone + Send + Sync;
    type Vector: Clone + Send + Sync;

    /// `word[0] ∘ … ∘ word[r-1]` applied to `v`.
    fn apply_word(&self, word: &[Self::Op], v: &Self::Vector) -> Result<Self::Vector, EngineError>;

    fn combine(&self, terms: &[(Scalar, Self::Vector)]) -> Self::Vector;

    fn divide_by_hbar(&self, v: &Self::Vector) -> Result<Self::Vector, EngineError>;

    /// `None` if the vector vanishes wherever it is known exactly, otherwise
    /// a rendering of the nonzero part.
    fn residual(&self, v: &Self::Vector) -> Option<String>;
}

/// `Σ c·word + (1/ħ) Σ c'·word'`, asserted to annihilate a probe.
#[derive(Clone, Debug)]
pub struct Combination<Op> {
    pub terms: Vec<(Scalar, Vec<Op>)>,
    pub over_hbar: Vec<(Scalar, Vec<Op>)>,
}

impl<Op> Default for Combination<Op> {
    fn default() -> Self {
        Combination {
            terms: Vec::new(),
            over_hbar: Vec::new(),
        }
    }
}

impl<Op: Clone> Combination<Op> {
    pub fn push(&mut self, c: Scalar, word: Vec<Op>) {
        if !c.is_zero() {
            self.terms.push((c, word));
        }
    }

    pub fn push_over_hbar(&mut self, c: Scalar, word: Vec<Op>) {
        if !c.is_zero() {
            self.over_hbar.push((c, word));
        }
    }

    /// `A·B − sign·B·A`, scaled by `c`.
    pub fn push_bracket(&mut self, c: &Scalar, a: &Op, b: &Op, sign: i64) {
        self.push(c.clone(), vec![a.clone(), b.clone()]);
        self.push(&Scalar::from_int(-sign) * c, vec![b.clone(), a.clone()]);
    }
}

pub fn evaluate<B: Backend>(backend: &B, comb: &Combination<B::Op>, probe: &B::Vector) -> Result<B::Vector, EngineError> {
    let mut parts = Vec::with_capacity(comb.terms.len() + 1);
    for (c, w) in &comb.terms {
        parts.push((c.clone(), backend.apply_word(w, probe)?));
    }
    if !comb.over_hbar.is_empty() {
        let mut inner = Vec::with_capacity(comb.over_hbar.len());
        for (c, w) in &comb.over_hbar {
            inner.push((c.clone(), backend.apply_word(w, probe)?));
        }
        let summed = backend.combine(&inner);
        parts.push((Scalar::one(), backend.divide_by_hbar(&summed)?));
    }
    Ok(backend.combine(&parts))
}

/// Polynomial `Σ_j p_j x^j` in `x = (first variable) − (second variable)`.
pub type XPoly = Vec<Scalar>;

/// Mode form of `P_L(x) A(u)B(v) = P_R(x) B(v)A(u)` at `(m, n)`:
/// `Σ_j p_j Σ_i C(j,i)(−1)^{j−i} A_{m+i} B_{n+j−i}` minus the same with
/// `P_R` and the order reversed. `sign = −1` turns the right side into
/// `−P_R B A`, for relations between anticommuting fields.
pub fn bilinear<Op: Clone>(
    a: &impl Fn(i64) -> Result<Op, EngineError>,
    b: &impl Fn(i64) -> Result<Op, EngineError>,
    p_left: &[Scalar],
    p_right: &[Scalar],
    m: i64,
    n: i64,
    sign: i64,
) -> Result<Combination<Op>, EngineError> {
    let mut comb = Combination::default();
    for (side, poly) in [(1i64, p_left), (-sign, p_right)] {
        for (j, pj) in poly.iter().enumerate() {
            if pj.is_zero() {
                continue;
            }
            for i in 0..=j {
                let c = Scalar::from_rational(binomial(j as u32, i as u32));
                let c = if (j - i) % 2 == 1 { -&c } else { c };
                let c = &(&c * pj) * &Scalar::from_int(side);
                let ai = a(m + i as i64)?;
                let bi = b(n + (j - i) as i64)?;
                let word = if side == 1 { vec![ai, bi] } else { vec![bi, ai] };
                comb.push(c, word);
            }
        }
    }
    Ok(comb)
}

/// `[e_m, f_n] − (1/ħ)(T⁺_{m,n} − T⁻_{m,n})`.
pub fn ef_delta<Op: Clone>(e: Op, f: Op, t_plus: Op, t_minus: Op) -> Combination<Op> {
    let mut comb = Combination::default();
    comb.push_bracket(&Scalar::one(), &e, &f, 1);
    comb.push_over_hbar(Scalar::from_int(-1), vec![t_plus]);
    comb.push_over_hbar(Scalar::one(), vec![t_minus]);
    comb
}

/// Evaluates a combination on a probe and reads off the residual.
pub fn outcome<B: Backend>(backend: &B, comb: &Combination<B::Op>, probe: &B::Vector) -> Result<Outcome, EngineError> {
    let v = evaluate(backend, comb, probe)?;
    Ok(match backend.residual(&v) {
        None => Outcome::Pass,
        Some(r) => Outcome::Residual(r),
    })
}

/// Result of a single check before it is placed in a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Residual(String),
    Skip(String),
    /// Passes, with an informational note.
    Note(String),
    /// Fails, with an informational note.
    Mismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// An exact statement; failure fails the run.
    Asserted,
    /// A cross-check whose outcome is reported but never gates.
    Flagged,
    /// Exploratory numbers without pass/fail meaning.
    Study,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "status")]
pub enum Status {
    Pass,
    Fail,
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub modes: Vec<i64>,
    pub probe: String,
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub severity: Severity,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl RelationReport {
    pub fn new(
        relation: impl Into<String>,
        severity: Severity,
        params: BTreeMap<String, String>,
        checks: Vec<CheckResult>,
    ) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped { .. } => summary.skipped += 1,
            }
        }
        RelationReport {
            relation: relation.into(),
            severity,
            params,
            checks,
            summary,
        }
    }

    /// True unless an asserted check failed.
    pub fn ok(&self) -> bool {
        self.severity != Severity::Asserted || self.summary.fail == 0
    }
}

/// One check: a closure producing its outcome.
pub struct Check<'a> {
    pub modes: Vec<i64>,
    pub probe: String,
    pub run: Box<dyn Fn() -> Result<Outcome, EngineError> + Send + Sync + 'a>,
}

impl<'a> Check<'a> {
    pub fn new(
        modes: Vec<i64>,
        probe: impl Into<String>,
        run: impl Fn() -> Result<Outcome, EngineError> + Send + Sync + 'a,
    ) -> Self {
        Check {
            modes,
            probe: probe.into(),
            run: Box::new(run),
        }
    }
}

/// Runs every check in parallel; the result order follows the input order.
/// Computational errors become failed checks.
pub fn run_checks(checks: Vec<Check<'_>>) -> Vec<CheckResult> {
    checks
        .into_par_iter()
        .map(|c| {
            let (status, residual, note) = match (c.run)() {
                Ok(Outcome::Pass) => (Status::Pass, None, None),
                Ok(Outcome::Residual(r)) => (Status::Fail, Some(r), None),
                Ok(Outcome::Skip(reason)) => (Status::Skipped { reason }, None, None),
                Ok(Outcome::Note(n)) => (Status::Pass, None, Some(n)),
                Ok(Outcome::Mismatch(n)) => (Status::Fail, None, Some(n)),
                Err(e) => (Status::Fail, Some(format!("error: {e}")), None),
            };
            CheckResult {
                modes: c.modes,
                probe: c.probe,
                status,
                residual,
                note,
            }
        })
        .collect()
}
