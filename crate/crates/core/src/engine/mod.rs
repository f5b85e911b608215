//! Exact mode actions of vertex operators on Fock vectors, and composition
//! of mode operators with sound truncation windows.

mod apply;
mod operator;
pub mod relation;

use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{Charges, FockError, FockState, FockVector};
use crate::level::Level;
use crate::scalar::ScalarError;
use crate::vop::VopError;

pub use apply::{apply_normal_form, apply_primitive};
pub use operator::{DOp, ModeOperator, StateOp, VopMode};
pub use relation::{
    bilinear, ef_delta, evaluate, outcome, run_checks, Backend, Check, CheckResult, Combination, Outcome, RelationReport,
    Severity, Status, Summary,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Vop(#[from] VopError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("window did not stabilize for {word} after {repeats} enlargements")]
    NonConvergentWindow { word: String, repeats: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TailPolicy {
    /// Intermediate caps from the homogeneity weight-drop bound.
    AnalyticBound,
    /// Enlarge all intermediate caps by `step` until two consecutive
    /// results agree, at most `repeats` times.
    Stabilization { step: usize, repeats: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub out_weight_cap: usize,
    /// Fixed cap for every intermediate vector; `None` derives it per step.
    pub intermediate_cap: Option<usize>,
    pub tail_policy: TailPolicy,
}

impl Window {
    pub fn new(out_weight_cap: usize) -> Self {
        Window {
            out_weight_cap,
            intermediate_cap: None,
            tail_policy: TailPolicy::AnalyticBound,
        }
    }
}

/// Applies mode operators on Fock space at a fixed level, memoizing
/// basis-state columns.
pub struct FockEngine {
    level: Level,
    cache: DashMap<(u64, FockState), (usize, Arc<FockVector>)>,
}

impl FockEngine {
    pub fn new(level: Level) -> Self {
        FockEngine {
            level,
            cache: DashMap::new(),
        }
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    /// Column of `op` on a basis state, exact up to weight `cap`.
    pub fn column(&self, op: &ModeOperator, state: &FockState, cap: usize) -> Result<Arc<FockVector>, EngineError> {
        let key = (op.id(), state.clone());
        if let Some(hit) = self.cache.get(&key) {
            let (c, v) = hit.value();
            if *c == cap {
                return Ok(v.clone());
            }
            if *c > cap {
                return Ok(Arc::new(v.truncated(cap)));
            }
        }
        let v = Arc::new(op.inner().apply_state(state, cap, &self.level)?);
        self.cache.insert(key, (cap, v.clone()));
        Ok(v)
    }

    /// `op` applied to `v`, keeping output weight `≤ cap`.
    pub fn apply(&self, op: &ModeOperator, v: &FockVector, cap: usize) -> Result<FockVector, EngineError> {
        let mut out = FockVector::zero();
        for (s, c) in v.iter() {
            let col = self.column(op, s, cap)?;
            out.add_scaled(&col, c);
        }
        Ok(out)
    }

    /// Input caps for each factor of `word` (leftmost acts last) so that the
    /// output is exact up to `out_cap`.
    fn analytic_caps(&self, word: &[ModeOperator], v: &FockVector, out_cap: usize) -> Result<Vec<i64>, EngineError> {
        let r = word.len();
        // sectors[j]: charges entering word[j]
        let mut sectors: Vec<Vec<Charges>> = vec![Vec::new(); r];
        let mut cur = v.charge_sectors();
        for j in (0..r).rev() {
            sectors[j] = cur.clone();
            let mut next = Vec::new();
            for c in &cur {
                for d in word[j].inner().charge_images(c, &self.level)? {
                    if !next.contains(&d) {
                        next.push(d);
                    }
                }
            }
            cur = next;
        }
        let mut caps = vec![0i64; r];
        let mut out = out_cap as i64;
        for j in 0..r {
            let mut drop = i64::MIN;
            for c in &sectors[j] {
                drop = drop.max(word[j].inner().max_weight_drop(c)?);
            }
            caps[j] = if drop == i64::MIN { -1 } else { out + drop };
            out = caps[j];
        }
        Ok(caps)
    }

    fn run_word(&self, word: &[ModeOperator], v: &FockVector, out_cap: usize, caps: &[i64]) -> Result<FockVector, EngineError> {
        let r = word.len();
        if r == 0 {
            return Ok(v.truncated(out_cap));
        }
        if caps[r - 1] < 0 {
            return Ok(FockVector::zero());
        }
        let mut cur = v.truncated(caps[r - 1] as usize);
        for j in (0..r).rev() {
            let cap_out = if j == 0 { out_cap as i64 } else { caps[j - 1] };
            if cap_out < 0 || cur.is_zero() {
                return Ok(FockVector::zero());
            }
            cur = self.apply(&word[j], &cur, cap_out as usize)?;
        }
        Ok(cur)
    }

    /// The product `word[0] ∘ … ∘ word[r-1]` applied to `v`, exact on output
    /// weights `≤ w.out_weight_cap`.
    pub fn compose(&self, word: &[ModeOperator], v: &FockVector, w: &Window) -> Result<FockVector, EngineError> {
        let r = word.len();
        let base: Vec<i64> = match w.intermediate_cap {
            Some(c) => vec![c as i64; r],
            None => match w.tail_policy {
                TailPolicy::AnalyticBound => self.analytic_caps(word, v, w.out_weight_cap)?,
                TailPolicy::Stabilization { .. } => vec![w.out_weight_cap as i64; r],
            },
        };
        match w.tail_policy {
            TailPolicy::AnalyticBound => self.run_word(word, v, w.out_weight_cap, &base),
            TailPolicy::Stabilization { step, repeats } => {
                let mut prev = self.run_word(word, v, w.out_weight_cap, &base)?;
                let mut extra = 0i64;
                for _ in 0..repeats {
                    extra += step as i64;
                    let caps: Vec<i64> = base.iter().enumerate().map(|(j, c)| c + extra * (j as i64 + 1)).collect();
                    let next = self.run_word(word, v, w.out_weight_cap, &caps)?;
                    if next == prev {
                        return Ok(next);
                    }
                    prev = next;
                }
                Err(EngineError::NonConvergentWindow {
                    word: word.iter().map(|o| o.label().to_string()).collect::<Vec<_>>().join(" "),
                    repeats,
                })
            }
        }
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }
}

/// Fock-space backend for relation checks: words are composed with a fixed
/// output window and residuals are read off on that window.
pub struct FockBackend<'a> {
    pub engine: &'a FockEngine,
    pub window: Window,
    /// When set, residual coefficients are compared after `ħ = h0`.
    pub hbar: Option<crate::scalar::Rational>,
}

impl<'a> FockBackend<'a> {
    pub fn new(engine: &'a FockEngine, window: Window) -> Self {
        FockBackend {
            engine,
            window,
            hbar: None,
        }
    }
}

impl Backend for FockBackend<'_> {
    type Op = ModeOperator;
    type Vector = FockVector;

    fn apply_word(&self, word: &[ModeOperator], v: &FockVector) -> Result<FockVector, EngineError> {
        self.engine.compose(word, v, &self.window)
    }

    fn combine(&self, terms: &[(crate::scalar::Scalar, FockVector)]) -> FockVector {
        let mut out = FockVector::zero();
        for (c, v) in terms {
            out.add_scaled(v, c);
        }
        out
    }

    fn divide_by_hbar(&self, v: &FockVector) -> Result<FockVector, EngineError> {
        Ok(v.try_map_coeffs(|c| c.divide_by_hbar())?)
    }

    fn residual(&self, v: &FockVector) -> Option<String> {
        let mut v = v.truncated(self.window.out_weight_cap);
        if let Some(h0) = &self.hbar {
            v = v.map_coeffs(|c| crate::scalar::Scalar::from_ratfunc(c.at_hbar(h0)));
        }
        (!v.is_zero()).then(|| v.to_string())
    }
}
