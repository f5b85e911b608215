//! Built-in operators of the realization and a registry that hands out
//! shared, memoized mode operators.

pub mod classical;
pub mod currents;
pub mod eval;

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use crate::engine::{Combination, EngineError, FockEngine, ModeOperator};
use crate::fock::FockVector;
use crate::level::Level;
use crate::scalar::{render_rational, Rational, Scalar};
use crate::vop::{parse_expr, Atom, NormalForm, VopExpr};

/// Type I towers descend from `Φ_{l,l}` with `f_0`, type II towers ascend
/// from `Ψ_{l,0}` with `e_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TowerType {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurrentId {
    E,
    F,
    Hp,
    Hm,
    Xi,
    Eta,
    /// `(u + kħ)^m h⁺(u + kħ)`.
    ShiftedHp {
        m: i64,
    },
    Screening {
        j: u32,
    },
    PhiTop {
        l: u32,
        j: u32,
        delta: Rational,
    },
    PsiBottom {
        l: u32,
        j: u32,
        delta: Rational,
    },
    ClassicalE,
    ClassicalF,
    ClassicalH,
}

impl CurrentId {
    pub fn is_classical(&self) -> bool {
        matches!(self, CurrentId::ClassicalE | CurrentId::ClassicalF | CurrentId::ClassicalH)
    }

    /// Expression for a deformed current; `None` for classical currents.
    pub fn expr(&self, level: &Level) -> Option<VopExpr> {
        Some(match self {
            CurrentId::E => currents::e(level),
            CurrentId::F => currents::f(level),
            CurrentId::Hp => currents::hp(level),
            CurrentId::Hm => currents::hm(level),
            CurrentId::Xi => currents::xi(level),
            CurrentId::Eta => currents::eta(level),
            CurrentId::ShiftedHp { m } => currents::shifted_hp(level, *m),
            CurrentId::Screening { j } => currents::screening(level, *j),
            CurrentId::PhiTop { l, j, delta } => currents::phi_top(level, *l, *j, delta),
            CurrentId::PsiBottom { l, j, delta } => currents::psi_bottom(level, *l, *j, delta),
            _ => return None,
        })
    }
}

impl fmt::Display for CurrentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurrentId::E => write!(f, "e"),
            CurrentId::F => write!(f, "f"),
            CurrentId::Hp => write!(f, "hp"),
            CurrentId::Hm => write!(f, "hm"),
            CurrentId::Xi => write!(f, "xi"),
            CurrentId::Eta => write!(f, "eta"),
            CurrentId::ShiftedHp { m } => write!(f, "hp_shift{{m={m}}}"),
            CurrentId::Screening { j } => write!(f, "S{{J={j}}}"),
            CurrentId::PhiTop { l, j, delta } => write!(f, "Phi{{J={j},delta={},l={l}}}", render_rational(delta)),
            CurrentId::PsiBottom { l, j, delta } => write!(f, "Psi{{J={j},delta={},l={l}}}", render_rational(delta)),
            CurrentId::ClassicalE => write!(f, "ecl"),
            CurrentId::ClassicalF => write!(f, "fcl"),
            CurrentId::ClassicalH => write!(f, "hcl"),
        }
    }
}

/// Operators of the Fock realization at a fixed level, with a shared engine.
pub struct Library {
    engine: FockEngine,
    forms: DashMap<CurrentId, Arc<NormalForm>>,
    ops: DashMap<(CurrentId, i64), ModeOperator>,
    d: ModeOperator,
}

impl Library {
    pub fn new(level: Level) -> Self {
        Library {
            engine: FockEngine::new(level),
            forms: DashMap::new(),
            ops: DashMap::new(),
            d: ModeOperator::d(),
        }
    }

    pub fn level(&self) -> &Level {
        self.engine.level()
    }

    pub fn engine(&self) -> &FockEngine {
        &self.engine
    }

    pub fn normal_form(&self, id: &CurrentId) -> Result<Arc<NormalForm>, EngineError> {
        if let Some(nf) = self.forms.get(id) {
            return Ok(nf.clone());
        }
        let expr = id
            .expr(self.level())
            .ok_or_else(|| EngineError::Invalid(format!("{id} has no vertex-operator form")))?;
        let nf = Arc::new(expr.normalize()?);
        self.forms.insert(id.clone(), nf.clone());
        Ok(nf)
    }

    /// Coefficient of `u^{-m-1}` of the current.
    pub fn op(&self, id: &CurrentId, m: i64) -> Result<ModeOperator, EngineError> {
        let key = (id.clone(), m);
        if let Some(op) = self.ops.get(&key) {
            return Ok(op.clone());
        }
        let label = format!("{id}[{m}]");
        let op = if id.is_classical() {
            classical::mode_operator(id, m, label)
        } else {
            ModeOperator::vop(label, self.normal_form(id)?, m)
        };
        Ok(self.ops.entry(key).or_insert(op).clone())
    }

    pub fn d(&self) -> ModeOperator {
        self.d.clone()
    }

    /// `ξ_0 = ∮ du/(2πi u) ξ(u)`, the `u^0` coefficient.
    pub fn xi0(&self) -> Result<ModeOperator, EngineError> {
        self.op(&CurrentId::Xi, -1)
    }

    /// `η_0 = ∮ du/(2πi) η(u)`, the `u^{-1}` coefficient.
    pub fn eta0(&self) -> Result<ModeOperator, EngineError> {
        self.op(&CurrentId::Eta, 0)
    }

    /// Screening charge `∮ du/(2πi) S(u)_{[J]}`.
    pub fn screening_charge(&self, j: u32) -> Result<ModeOperator, EngineError> {
        self.op(&CurrentId::Screening { j }, 0)
    }

    /// Mode `n` of the tower component `Φ_{l,m}` (type I, `l − m` brackets
    /// with `f_0`) or `Ψ_{l,m}` (type II, `m` brackets with `e_0`), left
    /// unnormalized apart from the factorial.
    pub fn vertex_tower(
        &self,
        ty: TowerType,
        l: u32,
        m: u32,
        j: u32,
        delta: &Rational,
        n: i64,
    ) -> Result<Combination<ModeOperator>, EngineError> {
        if m > l {
            return Err(EngineError::Invalid(format!("tower component m={m} exceeds l={l}")));
        }
        let (top, step, depth) = match ty {
            TowerType::I => (
                CurrentId::PhiTop {
                    l,
                    j,
                    delta: delta.clone(),
                },
                self.op(&CurrentId::F, 0)?,
                l - m,
            ),
            TowerType::II => (
                CurrentId::PsiBottom {
                    l,
                    j,
                    delta: delta.clone(),
                },
                self.op(&CurrentId::E, 0)?,
                m,
            ),
        };
        // the φ and χ shifts of Ψ are equal, so both towers use plain commutators
        let mut terms = vec![(Scalar::one(), vec![self.op(&top, n)?])];
        for r in 1..=depth {
            let inv = Scalar::from_rational(crate::scalar::rational(1, r as i64));
            let mut next = Vec::with_capacity(2 * terms.len());
            for (c, w) in &terms {
                let c = c * &inv;
                let mut right = w.clone();
                right.push(step.clone());
                let mut left = vec![step.clone()];
                left.extend(w.iter().cloned());
                next.push((c.clone(), right));
                next.push((-&c, left));
            }
            terms = next;
        }
        let mut comb = Combination::default();
        for (c, w) in terms {
            comb.push(c, w);
        }
        Ok(comb)
    }

    /// Resolves one atom of the operator-word grammar.
    pub fn resolve(&self, atom: &Atom) -> Result<ModeOperator, EngineError> {
        let int_param = |key: &str, default: Option<u32>| -> Result<u32, EngineError> {
            match atom.param(key) {
                Some(v) if v.is_integer() && *v >= Rational::from_integer(0.into()) => v
                    .to_integer()
                    .try_into()
                    .map_err(|_| EngineError::Invalid(format!("parameter {key} out of range"))),
                Some(v) => Err(EngineError::Invalid(format!(
                    "parameter {key} must be a non-negative integer, got {}",
                    render_rational(v)
                ))),
                None => default.ok_or_else(|| EngineError::Invalid(format!("{} needs parameter {key}", atom.name))),
            }
        };
        let delta = || -> Result<Rational, EngineError> {
            let d = atom
                .param("delta")
                .cloned()
                .unwrap_or_else(|| Rational::new(1.into(), 10.into()));
            if d <= Rational::from_integer(0.into()) {
                return Err(EngineError::Invalid("delta must be positive".into()));
            }
            Ok(d)
        };
        let mode = atom.mode.unwrap_or(0);
        let id = match atom.name.as_str() {
            "d" => {
                if atom.mode.is_some() {
                    return Err(EngineError::Invalid("d takes no mode".into()));
                }
                return Ok(self.d());
            }
            "xi0" => return self.xi0(),
            "eta0" => return self.eta0(),
            "e" => CurrentId::E,
            "f" => CurrentId::F,
            "hp" => CurrentId::Hp,
            "hm" => CurrentId::Hm,
            "xi" => CurrentId::Xi,
            "eta" => CurrentId::Eta,
            "S" => CurrentId::Screening {
                j: int_param("J", None)?,
            },
            "Phi" => CurrentId::PhiTop {
                l: int_param("l", None)?,
                j: int_param("J", None)?,
                delta: delta()?,
            },
            "Psi" => CurrentId::PsiBottom {
                l: int_param("l", None)?,
                j: int_param("J", None)?,
                delta: delta()?,
            },
            "ecl" => CurrentId::ClassicalE,
            "fcl" => CurrentId::ClassicalF,
            "hcl" => CurrentId::ClassicalH,
            other => return Err(EngineError::Invalid(format!("unknown generator {other}"))),
        };
        self.op(&id, mode)
    }

    /// Evaluates an operator-word expression on a vector, exact on output
    /// weights `≤ cap`.
    pub fn act(&self, text: &str, v: &FockVector, cap: usize) -> Result<FockVector, ActError> {
        let sum = parse_expr(text)?;
        let mut out = FockVector::zero();
        for (c, word) in &sum.terms {
            let ops: Vec<ModeOperator> = word.atoms.iter().map(|a| self.resolve(a)).collect::<Result<_, _>>()?;
            let w = self.engine.compose(&ops, v, &crate::engine::Window::new(cap))?;
            out.add_scaled(&w, &Scalar::from_rational(c.clone()));
        }
        Ok(out)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ActError {
    #[error(transparent)]
    Parse(#[from] crate::vop::ParseError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{parse_state, Charges, FockState};

    fn vac(l: i64, s: i64, t: i64) -> FockVector {
        FockVector::vacuum(Charges::int(l, s, t))
    }

    #[test]
    fn e_kills_charged_vacua() {
        let lib = Library::new(Level::Symbolic);
        for l in 0..3 {
            for m in 0..5 {
                let v = lib
                    .engine()
                    .apply(&lib.op(&CurrentId::E, m).unwrap(), &vac(l, 0, 0), 4)
                    .unwrap();
                assert!(v.is_zero(), "e[{m}] |{l},0,0> = {v}");
            }
        }
    }

    #[test]
    fn f_kills_vacuum() {
        let lib = Library::new(Level::Symbolic);
        for m in 0..5 {
            let v = lib
                .engine()
                .apply(&lib.op(&CurrentId::F, m).unwrap(), &vac(0, 0, 0), 4)
                .unwrap();
            assert!(v.is_zero(), "f[{m}] |0,0,0> = {v}");
        }
    }

    #[test]
    fn eta0_single_contraction() {
        let lib = Library::new(Level::Symbolic);
        let v = parse_state("achi[-1] |0,0,0>", lib.level()).unwrap();
        let out = lib.engine().apply(&lib.eta0().unwrap(), &v, 0).unwrap();
        assert_eq!(out.coeff(&FockState::vacuum(Charges::int(0, 0, 1))), Scalar::from_int(-1));
        assert!(lib.engine().apply(&lib.eta0().unwrap(), &vac(0, 0, 0), 3).unwrap().is_zero());
    }

    #[test]
    fn tower_depths() {
        let lib = Library::new(Level::value(crate::scalar::int(3)).unwrap());
        let d = crate::scalar::rational(1, 10);
        // m = l is Φ_{l,l} itself, m = 0 is Ψ_{l,0} itself
        assert_eq!(lib.vertex_tower(TowerType::I, 2, 2, 1, &d, 0).unwrap().terms.len(), 1);
        assert_eq!(lib.vertex_tower(TowerType::II, 2, 0, 1, &d, 0).unwrap().terms.len(), 1);
        let t = lib.vertex_tower(TowerType::I, 2, 0, 1, &d, 0).unwrap();
        assert_eq!(t.terms.len(), 4);
        // 1/(l−m)! spread over the nested brackets
        assert_eq!(t.terms[0].0, Scalar::from_rational(crate::scalar::rational(1, 2)));
        assert!(lib.vertex_tower(TowerType::II, 1, 2, 1, &d, 0).is_err());
    }
}
