//! The `(l+1)`-dimensional evaluation module `V^{(l)}_u` at level zero.
//!
//! Vectors are finite sums `Σ c·w_m⊗u^a`. Negative modes multiply by
//! `(u + αħ)^n` with `n < 0`, an infinite series in `u^{-1}`; it is cut at a
//! configured power floor, and each vector remembers below which power its
//! coefficients are no longer exact.

use std::collections::BTreeMap;
use std::fmt;

use crate::engine::{Backend, EngineError};
use crate::scalar::{gen_binomial_q, rational, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalGen {
    E,
    F,
    /// Plain `h_n`.
    H,
    /// Mode `[m]` of `h⁺(u) = 1 + ħ Σ_{n≥0} h_n u^{-n-1}`.
    Hp,
    /// Mode `[m]` of `h⁻(u) = 1 - ħ Σ_{n<0} h_n u^{-n-1}`.
    Hm,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvalOp {
    pub gen: EvalGen,
    pub mode: i64,
}

impl EvalOp {
    pub fn new(gen: EvalGen, mode: i64) -> Self {
        EvalOp { gen, mode }
    }
}

impl fmt::Display for EvalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.gen {
            EvalGen::E => "e",
            EvalGen::F => "f",
            EvalGen::H => "h",
            EvalGen::Hp => "hp",
            EvalGen::Hm => "hm",
            EvalGen::D => return write!(f, "d"),
        };
        write!(f, "{name}[{}]", self.mode)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalVector {
    pub l: u32,
    terms: BTreeMap<(u32, i64), Scalar>,
    /// Coefficients of `u^a` with `a < floor` may be incomplete.
    floor: Option<i64>,
}

impl EvalVector {
    pub fn zero(l: u32) -> Self {
        EvalVector {
            l,
            terms: BTreeMap::new(),
            floor: None,
        }
    }

    /// `w_m ⊗ u^a`.
    pub fn basis(l: u32, m: u32, a: i64) -> Self {
        assert!(m <= l, "w_{m} outside V^({l})");
        let mut v = Self::zero(l);
        v.add_term(m, a, Scalar::one());
        v
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn add_term(&mut self, m: u32, a: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((m, a)).or_insert_with(Scalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(m, a));
        }
    }

    pub fn coeff(&self, m: u32, a: i64) -> Scalar {
        self.terms.get(&(m, a)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, i64), &Scalar)> {
        self.terms.iter()
    }

    fn lower_floor(&mut self, f: Option<i64>) {
        self.floor = match (self.floor, f) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }

    /// Linear combination; the exactness floor is the largest of the inputs.
    pub fn combine(l: u32, terms: &[(Scalar, EvalVector)]) -> EvalVector {
        let mut out = EvalVector::zero(l);
        for (c, v) in terms {
            out.lower_floor(v.floor);
            for ((m, a), x) in &v.terms {
                out.add_term(*m, *a, c * x);
            }
        }
        out
    }

    /// Terms on or above the exactness floor.
    pub fn exact_part(&self) -> EvalVector {
        let mut out = self.clone();
        if let Some(f) = self.floor {
            out.terms.retain(|(_, a), _| *a >= f);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn try_map_coeffs<E>(&self, mut f: impl FnMut(&Scalar) -> Result<Scalar, E>) -> Result<EvalVector, E> {
        let mut out = EvalVector::zero(self.l);
        out.floor = self.floor;
        for ((m, a), c) in &self.terms {
            out.add_term(*m, *a, f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for EvalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((m, a), c)| format!("({c}) w{m}*u^{a}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The module `V^{(l)}_u` with a power floor for negative-mode expansions.
#[derive(Clone, Debug)]
pub struct EvalModule {
    pub l: u32,
    pub power_floor: i64,
}

impl EvalModule {
    pub fn new(l: u32, power_floor: i64) -> Self {
        EvalModule { l, power_floor }
    }

    /// `c (u + αħ)^n (w_target ⊗ u^a)` accumulated into `out`.
    fn shifted_power(&self, out: &mut EvalVector, target: u32, a: i64, c: &Scalar, alpha: &Rational, n: i64) -> bool {
        let mut truncated = false;
        let mut j = 0u32;
        loop {
            let power = a + n - j as i64;
            if n >= 0 && j as i64 > n {
                break;
            }
            if power < self.power_floor {
                truncated = true;
                break;
            }
            let coeff = gen_binomial_q(&Rational::from_integer(n.into()), j) * crate::scalar::pow_q(alpha, j);
            if coeff != Rational::from_integer(0.into()) || j == 0 {
                out.add_term(target, power, c.scale_q(&coeff).shift_hbar(j));
            }
            if alpha == &Rational::from_integer(0.into()) {
                break;
            }
            j += 1;
        }
        truncated
    }

    /// One generator applied to a vector.
    pub fn apply(&self, op: &EvalOp, v: &EvalVector) -> EvalVector {
        let l = self.l as i64;
        let n = op.mode;
        let mut out = EvalVector::zero(self.l);
        // an input u^a reaches at most u^{a+n}; the constant of h± keeps u^a
        let reach = match op.gen {
            EvalGen::D => -1,
            EvalGen::Hp | EvalGen::Hm if n == -1 => 0,
            _ => n,
        };
        out.floor = v.floor.map(|f| f + reach);
        let mut truncated = false;
        for ((m, a), c) in v.iter() {
            let (m, a) = (*m, *a);
            let mi = m as i64;
            let up = rational(l - 2 * mi + 1, 2);
            let down = rational(l - 2 * mi - 1, 2);
            match op.gen {
                EvalGen::E => {
                    if m > 0 {
                        let c = c.scale_q(&Rational::from_integer(mi.into()));
                        truncated |= self.shifted_power(&mut out, m - 1, a, &c, &up, n);
                    }
                }
                EvalGen::F => {
                    if m < self.l {
                        let c = c.scale_q(&Rational::from_integer((l - mi).into()));
                        truncated |= self.shifted_power(&mut out, m + 1, a, &c, &down, n);
                    }
                }
                EvalGen::H => truncated |= self.h(&mut out, m, a, c, n),
                EvalGen::Hp | EvalGen::Hm => {
                    // generating-function mode [n] multiplies u^{-n-1}
                    if n == -1 {
                        out.add_term(m, a, c.clone());
                    }
                    let plus = op.gen == EvalGen::Hp;
                    if (plus && n >= 0) || (!plus && n < 0) {
                        let sign = if plus { 1 } else { -1 };
                        let c = c.shift_hbar(1).scale_q(&Rational::from_integer(sign.into()));
                        truncated |= self.h(&mut out, m, a, &c, n);
                    }
                }
                EvalGen::D => {
                    out.add_term(m, a - 1, c.scale_q(&Rational::from_integer((-a).into())));
                }
            }
        }
        if truncated {
            out.lower_floor(Some(self.power_floor));
        }
        out
    }

    fn h(&self, out: &mut EvalVector, m: u32, a: i64, c: &Scalar, n: i64) -> bool {
        let l = self.l as i64;
        let mi = m as i64;
        let c1 = c.scale_q(&Rational::from_integer(((mi + 1) * (l - mi)).into()));
        let c2 = c.scale_q(&Rational::from_integer((-mi * (l - mi + 1)).into()));
        let mut t = false;
        if !c1.is_zero() {
            t |= self.shifted_power(out, m, a, &c1, &rational(l - 2 * mi - 1, 2), n);
        }
        if !c2.is_zero() {
            t |= self.shifted_power(out, m, a, &c2, &rational(l - 2 * mi + 1, 2), n);
        }
        t
    }

    /// `word[0] ∘ … ∘ word[r-1]` applied to `v`.
    pub fn apply_word(&self, word: &[EvalOp], v: &EvalVector) -> EvalVector {
        word.iter().rev().fold(v.clone(), |acc, op| self.apply(op, &acc))
    }
}

impl Backend for EvalModule {
    type Op = EvalOp;
    type Vector = EvalVector;

    fn apply_word(&self, word: &[EvalOp], v: &EvalVector) -> Result<EvalVector, EngineError> {
        Ok(EvalModule::apply_word(self, word, v))
    }

    fn combine(&self, terms: &[(Scalar, EvalVector)]) -> EvalVector {
        EvalVector::combine(self.l, terms)
    }

    fn divide_by_hbar(&self, v: &EvalVector) -> Result<EvalVector, EngineError> {
        Ok(v.try_map_coeffs(|c| c.divide_by_hbar())?)
    }

    fn residual(&self, v: &EvalVector) -> Option<String> {
        let v = v.exact_part();
        (!v.is_zero()).then(|| v.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(l: u32) -> EvalModule {
        EvalModule::new(l, -12)
    }

    #[test]
    fn e0_lowers() {
        let v = module(1).apply(&EvalOp::new(EvalGen::E, 0), &EvalVector::basis(1, 1, 0));
        assert_eq!(v, EvalVector::basis(1, 0, 0));
    }

    #[test]
    fn f0_raises_with_l() {
        for l in 1..4 {
            let v = module(l).apply(&EvalOp::new(EvalGen::F, 0), &EvalVector::basis(l, 0, 0));
            assert_eq!(v.coeff(1, 0), Scalar::from_int(l as i64));
        }
    }

    #[test]
    fn h0_weight() {
        let l = 3;
        for m in 0..=l {
            let v = module(l).apply(&EvalOp::new(EvalGen::H, 0), &EvalVector::basis(l, m, 2));
            // oracle: (m+1)(l-m) - m(l-m+1) = l - 2m
            let expect = (m as i64 + 1) * (l as i64 - m as i64) - m as i64 * (l as i64 - m as i64 + 1);
            assert_eq!(expect, l as i64 - 2 * m as i64);
            assert_eq!(v.coeff(m, 2), Scalar::from_int(expect));
        }
    }

    #[test]
    fn d_lowers_power() {
        let v = module(2).apply(&EvalOp::new(EvalGen::D, 0), &EvalVector::basis(2, 1, 2));
        assert_eq!(v.coeff(1, 1), Scalar::from_int(-2));
    }

    #[test]
    fn negative_mode_sets_floor() {
        let v = module(2).apply(&EvalOp::new(EvalGen::E, -1), &EvalVector::basis(2, 1, 0));
        assert_eq!(v.floor(), Some(-12));
        // (u + ħ/2)^{-1} = u^{-1} - (1/2)ħ u^{-2} + ...
        assert_eq!(v.coeff(0, -1), Scalar::one());
        assert_eq!(v.coeff(0, -2), Scalar::monomial(crate::scalar::RatFunc::from_ratio(-1, 2), 1));
    }
}
