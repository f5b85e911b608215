use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::fock::{apply_d, Charges, FockState, FockVector};
use crate::level::Level;
use crate::vop::NormalForm;

use super::apply::apply_normal_form;
use super::EngineError;

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

/// A linear map on Fock space given by its action on basis states.
pub trait StateOp: Send + Sync {
    /// Exact output components of weight `≤ cap`.
    fn apply_state(&self, state: &FockState, cap: usize, level: &Level) -> Result<FockVector, EngineError>;

    /// Upper bound on `w_in − w_out` over nonzero matrix elements from the
    /// given charge sector.
    fn max_weight_drop(&self, charges: &Charges) -> Result<i64, EngineError>;

    /// Charge sectors reachable from `charges`.
    fn charge_images(&self, charges: &Charges, level: &Level) -> Result<Vec<Charges>, EngineError>;
}

/// The `u^{-m-1}` coefficient of a normalized vertex-operator expression.
pub struct VopMode {
    pub nf: Arc<NormalForm>,
    pub mode: i64,
}

impl StateOp for VopMode {
    fn apply_state(&self, state: &FockState, cap: usize, level: &Level) -> Result<FockVector, EngineError> {
        apply_normal_form(&self.nf, self.mode, state, cap, level)
    }

    fn max_weight_drop(&self, charges: &Charges) -> Result<i64, EngineError> {
        Ok(self.nf.max_weight_drop(charges, self.mode)?)
    }

    fn charge_images(&self, charges: &Charges, level: &Level) -> Result<Vec<Charges>, EngineError> {
        let mut out: Vec<Charges> = Vec::new();
        for (_, p) in &self.nf.terms {
            let mut c = *charges;
            for (b, beta) in &p.charges {
                let (dl, ds, dt) = crate::fock::charge_shift(*b, beta, level)?;
                c = c.shifted(dl, ds, dt);
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }
}

/// The derivation `d`, raising weight by one.
pub struct DOp;

impl StateOp for DOp {
    fn apply_state(&self, state: &FockState, cap: usize, level: &Level) -> Result<FockVector, EngineError> {
        if state.weight() + 1 > cap {
            return Ok(FockVector::zero());
        }
        Ok(apply_d(&FockVector::basis(state.clone()), cap, level)?)
    }

    fn max_weight_drop(&self, _: &Charges) -> Result<i64, EngineError> {
        Ok(-1)
    }

    fn charge_images(&self, charges: &Charges, _: &Level) -> Result<Vec<Charges>, EngineError> {
        Ok(vec![*charges])
    }
}

/// A named, shareable operator. Identity for caching is the allocation id,
/// so build each operator once and clone the handle.
#[derive(Clone)]
pub struct ModeOperator {
    id: u64,
    label: Arc<str>,
    op: Arc<dyn StateOp>,
}

impl ModeOperator {
    pub fn new(label: impl Into<String>, op: impl StateOp + 'static) -> Self {
        ModeOperator {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            label: label.into().into(),
            op: Arc::new(op),
        }
    }

    pub fn vop(label: impl Into<String>, nf: Arc<NormalForm>, mode: i64) -> Self {
        Self::new(label, VopMode { nf, mode })
    }

    pub fn d() -> Self {
        Self::new("d", DOp)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn inner(&self) -> &dyn StateOp {
        self.op.as_ref()
    }
}

impl fmt::Debug for ModeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl fmt::Display for ModeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}
