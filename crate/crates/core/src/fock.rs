//! Triple-boson Fock spaces `F_{l,s,t}`.
//!
//! The Heisenberg algebra has three bosons `Φ`, `φ`, `χ` with
//! `[a_{X,m}, a_{X,n}] = κ(X)·m·δ_{m+n,0}` and `[∂_X, a_X] = κ(X)`, where
//! `κ(Φ) = (k+2)/2`, `κ(φ) = -1`, `κ(χ) = 1`. Basis states are monomials in
//! the creation modes applied to the charged vacuum `|l;s,t⟩`, stored as
//! occupation multisets so that vector equality is decidable.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::level::Level;
use crate::scalar::{RatFunc, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Boson {
    /// `Φ`, metric `(k+2)/2`.
    BigPhi,
    /// `φ`, metric `-1`.
    SmallPhi,
    /// `χ`, metric `+1`.
    Chi,
}

impl Boson {
    pub const ALL: [Boson; 3] = [Boson::BigPhi, Boson::SmallPhi, Boson::Chi];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Metric constant `κ(X)`.
    pub fn metric(self, level: &Level) -> RatFunc {
        match self {
            Boson::BigPhi => level.k_plus(2).scale(&crate::scalar::rational(1, 2)),
            Boson::SmallPhi => RatFunc::from_int(-1),
            Boson::Chi => RatFunc::one(),
        }
    }

    /// Prefix used in the state syntax.
    pub fn prefix(self) -> &'static str {
        match self {
            Boson::BigPhi => "aPhi",
            Boson::SmallPhi => "aphi",
            Boson::Chi => "achi",
        }
    }
}

/// Vacuum labels of `|l;s,t⟩ = exp(l/(k+2)·a_Φ + s·a_φ + t·a_χ)|0⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Charges {
    pub l: Rational64,
    pub s: i64,
    pub t: i64,
}

impl Charges {
    pub fn new(l: Rational64, s: i64, t: i64) -> Self {
        Charges { l, s, t }
    }

    pub fn int(l: i64, s: i64, t: i64) -> Self {
        Charges::new(Rational64::from_integer(l), s, t)
    }

    /// Eigenvalue of `∂_X`: `l/2`, `-s`, `t`.
    pub fn eigenvalue(&self, boson: Boson) -> Rational {
        match boson {
            Boson::BigPhi => Rational::new((*self.l.numer()).into(), (2 * *self.l.denom()).into()),
            Boson::SmallPhi => crate::scalar::int(-self.s),
            Boson::Chi => crate::scalar::int(self.t),
        }
    }

    /// Eigenvalue of `∂_φ + ∂_χ`.
    pub fn phi_chi_charge(&self) -> i64 {
        self.t - self.s
    }

    pub fn shifted(&self, dl: Rational64, ds: i64, dt: i64) -> Charges {
        Charges::new(self.l + dl, self.s + ds, self.t + dt)
    }
}

impl fmt::Display for Charges {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.l.is_integer() {
            write!(f, "|{},{},{}>", self.l.numer(), self.s, self.t)
        } else {
            write!(f, "|{}/{},{},{}>", self.l.numer(), self.l.denom(), self.s, self.t)
        }
    }
}

/// Occupation multiset of one boson: `mult[n-1]` quanta of `a_{-n}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupation {
    mult: Vec<u16>,
}

impl Occupation {
    pub fn from_mults(mut mult: Vec<u16>) -> Self {
        while mult.last() == Some(&0) {
            mult.pop();
        }
        Occupation { mult }
    }

    /// Multiplicity of `a_{-n}`, `n ≥ 1`.
    pub fn get(&self, n: usize) -> u16 {
        self.mult.get(n - 1).copied().unwrap_or(0)
    }

    pub fn mults(&self) -> &[u16] {
        &self.mult
    }

    pub fn weight(&self) -> usize {
        self.mult.iter().enumerate().map(|(i, m)| (i + 1) * *m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    fn add(&mut self, n: usize, by: u16) {
        if self.mult.len() < n {
            self.mult.resize(n, 0);
        }
        self.mult[n - 1] += by;
    }

    fn remove(&mut self, n: usize, by: u16) {
        self.mult[n - 1] -= by;
        while self.mult.last() == Some(&0) {
            self.mult.pop();
        }
    }

    /// Multiset sum.
    pub fn union(&self, other: &Occupation) -> Occupation {
        let len = self.mult.len().max(other.mult.len());
        let mult = (0..len)
            .map(|i| self.mult.get(i).copied().unwrap_or(0) + other.mult.get(i).copied().unwrap_or(0))
            .collect();
        Occupation::from_mults(mult)
    }

    /// Multiset difference; `other` must be contained in `self`.
    pub fn minus(&self, other: &Occupation) -> Occupation {
        let mult = self
            .mult
            .iter()
            .enumerate()
            .map(|(i, m)| m - other.mult.get(i).copied().unwrap_or(0))
            .collect();
        Occupation::from_mults(mult)
    }

    /// Every occupation of total weight exactly `w`.
    pub fn all_of_weight(w: usize) -> Vec<Occupation> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; w];
        fn rec(rem: usize, max_part: usize, cur: &mut Vec<u16>, out: &mut Vec<Occupation>) {
            if rem == 0 {
                out.push(Occupation::from_mults(cur.clone()));
                return;
            }
            for part in (1..=max_part.min(rem)).rev() {
                cur[part - 1] += 1;
                rec(rem - part, part, cur, out);
                cur[part - 1] -= 1;
            }
        }
        rec(w, w, &mut cur, &mut out);
        out
    }
}

/// A PBW basis state: occupation multisets on top of a charged vacuum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    pub charges: Charges,
    pub occ: [Occupation; 3],
}

impl FockState {
    pub fn vacuum(charges: Charges) -> Self {
        FockState {
            charges,
            occ: Default::default(),
        }
    }

    pub fn weight(&self) -> usize {
        self.occ.iter().map(Occupation::weight).sum()
    }

    pub fn occupation(&self, boson: Boson) -> &Occupation {
        &self.occ[boson.index()]
    }

    pub fn with_charges(&self, charges: Charges) -> Self {
        FockState {
            charges,
            occ: self.occ.clone(),
        }
    }

    /// `a_{X,-n}` applied to this monomial.
    pub fn create(&self, boson: Boson, n: usize) -> Self {
        let mut s = self.clone();
        s.occ[boson.index()].add(n, 1);
        s
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in Boson::ALL {
            for (i, m) in self.occ[b.index()].mults().iter().enumerate() {
                for _ in 0..*m {
                    write!(f, "{}[-{}] ", b.prefix(), i + 1)?;
                }
            }
        }
        write!(f, "{}", self.charges)
    }
}

/// Finite linear combination of basis states with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<FockState, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: FockState) -> Self {
        let mut v = Self::zero();
        v.add_term(state, Scalar::one());
        v
    }

    pub fn vacuum(charges: Charges) -> Self {
        Self::basis(FockState::vacuum(charges))
    }

    pub fn add_term(&mut self, state: FockState, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(state) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (s, x) in &other.terms {
            self.add_term(s.clone(), if c.is_one() { x.clone() } else { x * c });
        }
    }

    pub fn add_assign(&mut self, other: &FockVector) {
        for (s, x) in &other.terms {
            self.add_term(s.clone(), x.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &FockVector) {
        for (s, x) in &other.terms {
            self.add_term(s.clone(), -x);
        }
    }

    pub fn plus(&self, other: &FockVector) -> FockVector {
        let mut v = self.clone();
        v.add_assign(other);
        v
    }

    pub fn minus(&self, other: &FockVector) -> FockVector {
        let mut v = self.clone();
        v.sub_assign(other);
        v
    }

    pub fn scaled(&self, c: &Scalar) -> FockVector {
        let mut v = FockVector::zero();
        v.add_scaled(self, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, state: &FockState) -> Scalar {
        self.terms.get(state).cloned().unwrap_or_default()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(FockState::weight).max()
    }

    /// Components of weight ≤ `cap`.
    pub fn truncated(&self, cap: usize) -> FockVector {
        FockVector {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.weight() <= cap)
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// Distinct vacuum charges present.
    pub fn charge_sectors(&self) -> Vec<Charges> {
        let mut v: Vec<Charges> = self.terms.keys().map(|s| s.charges).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Applies `f` coefficientwise, dropping zeros.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<E>(&self, mut f: impl FnMut(&Scalar) -> Result<Scalar, E>) -> Result<FockVector, E> {
        let mut out = FockVector::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl FromIterator<(FockState, Scalar)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (FockState, Scalar)>>(iter: I) -> Self {
        let mut v = FockVector::zero();
        for (s, c) in iter {
            v.add_term(s, c);
        }
        v
    }
}

impl fmt::Display for FockVector {
    /// `0`, or `scalar state` terms joined by ` + ` in canonical state order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("output weight {needed} exceeds weight cap {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("charge exponent {0} does not shift the vacuum by a rational label")]
    BadChargeExponent(String),
    #[error("state syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
}

/// Single Heisenberg generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Oscillator {
    /// `a_{X,n}`, `n ≠ 0`.
    Mode(i64),
    /// `exp(β a_X)`.
    ChargeExp(RatFunc),
    /// `∂_X`.
    ChargeEigen,
}

/// Vacuum label shift produced by `exp(β a_X)`.
pub fn charge_shift(boson: Boson, beta: &RatFunc, level: &Level) -> Result<(Rational64, i64, i64), FockError> {
    let bad = || FockError::BadChargeExponent(beta.to_string());
    let to_r64 = |q: Rational| -> Result<Rational64, FockError> {
        use num_traits::ToPrimitive;
        Ok(Rational64::new(
            q.numer().to_i64().ok_or_else(bad)?,
            q.denom().to_i64().ok_or_else(bad)?,
        ))
    };
    match boson {
        Boson::BigPhi => {
            let dl = (beta * &level.k_plus(2)).as_rational().ok_or_else(bad)?;
            Ok((to_r64(dl)?, 0, 0))
        }
        Boson::SmallPhi | Boson::Chi => {
            let q = beta.as_rational().ok_or_else(bad)?;
            if !q.is_integer() {
                return Err(bad());
            }
            let n = to_r64(q)?.to_integer();
            if boson == Boson::SmallPhi {
                Ok((Rational64::zero(), n, 0))
            } else {
                Ok((Rational64::zero(), 0, n))
            }
        }
    }
}

/// Applies one Heisenberg generator.
pub fn apply_oscillator(boson: Boson, osc: &Oscillator, v: &FockVector, level: &Level) -> Result<FockVector, FockError> {
    let mut out = FockVector::zero();
    match osc {
        Oscillator::Mode(0) => {
            return apply_oscillator(boson, &Oscillator::ChargeEigen, v, level);
        }
        Oscillator::Mode(n) if *n < 0 => {
            for (s, c) in v.iter() {
                out.add_term(s.create(boson, n.unsigned_abs() as usize), c.clone());
            }
        }
        Oscillator::Mode(n) => {
            let n = *n as usize;
            let kappa = boson.metric(level);
            for (s, c) in v.iter() {
                let m = s.occupation(boson).get(n);
                if m == 0 {
                    continue;
                }
                let mut t = s.clone();
                t.occ[boson.index()].remove(n, 1);
                let f = kappa.scale(&crate::scalar::int((n * m as usize) as i64));
                out.add_term(t, c.scale(&f));
            }
        }
        Oscillator::ChargeExp(beta) => {
            let (dl, ds, dt) = charge_shift(boson, beta, level)?;
            for (s, c) in v.iter() {
                out.add_term(s.with_charges(s.charges.shifted(dl, ds, dt)), c.clone());
            }
        }
        Oscillator::ChargeEigen => {
            for (s, c) in v.iter() {
                out.add_term(s.clone(), c.scale_q(&s.charges.eigenvalue(boson)));
            }
        }
    }
    Ok(out)
}

fn d_prefactor(boson: Boson, level: &Level) -> RatFunc {
    match boson {
        Boson::BigPhi => &RatFunc::from_int(2) / &level.k_plus(2),
        Boson::SmallPhi => RatFunc::from_int(-1),
        Boson::Chi => RatFunc::one(),
    }
}

/// `d` on one basis state, every output having weight `w + 1`.
fn d_on_state(s: &FockState, level: &Level) -> Vec<(FockState, Scalar)> {
    let mut out = Vec::new();
    for b in Boson::ALL {
        let pre = d_prefactor(b, level);
        // a_{X,-1} ∂_X
        let ev = s.charges.eigenvalue(b);
        if !ev.is_zero() {
            out.push((s.create(b, 1), Scalar::from_ratfunc(pre.scale(&ev))));
        }
        // a_{X,-(n+1)} a_{X,n}
        let kappa = b.metric(level);
        for (i, m) in s.occupation(b).mults().iter().enumerate() {
            if *m == 0 {
                continue;
            }
            let n = i + 1;
            let mut t = s.clone();
            t.occ[b.index()].remove(n, 1);
            let t = t.create(b, n + 1);
            let f = (&pre * &kappa).scale(&crate::scalar::int((n * *m as usize) as i64));
            out.push((t, Scalar::from_ratfunc(f)));
        }
    }
    out
}

fn d_unchecked(v: &FockVector, cap: usize, level: &Level) -> FockVector {
    let mut out = FockVector::zero();
    for (s, c) in v.iter() {
        if s.weight() + 1 > cap {
            continue;
        }
        for (t, f) in d_on_state(s, level) {
            out.add_term(t, c * &f);
        }
    }
    out
}

/// The derivation `d = d_Φ + d_φ + d_χ`; raises weight by exactly one.
pub fn apply_d(v: &FockVector, weight_cap: usize, level: &Level) -> Result<FockVector, FockError> {
    if let Some(w) = v.max_weight() {
        if w + 1 > weight_cap {
            return Err(FockError::CapExceeded {
                needed: w + 1,
                cap: weight_cap,
            });
        }
    }
    Ok(d_unchecked(v, weight_cap, level))
}

/// `e^{γd} v`, truncated to weight ≤ `weight_cap`.
pub fn translate(gamma: &Rational, v: &FockVector, weight_cap: usize, level: &Level) -> FockVector {
    let mut acc = v.truncated(weight_cap);
    let mut term = acc.clone();
    let mut j = 0i64;
    while !term.is_zero() {
        j += 1;
        let f = Scalar::from_rational(gamma / crate::scalar::int(j));
        term = d_unchecked(&term, weight_cap, level).scaled(&f);
        acc.add_assign(&term);
    }
    acc
}

/// All PBW basis states of exact weight `w` over the given vacuum.
pub fn basis(charges: Charges, w: usize) -> Vec<FockState> {
    let tables: Vec<Vec<Occupation>> = (0..=w).map(Occupation::all_of_weight).collect();
    let mut out = Vec::new();
    for w0 in 0..=w {
        for w1 in 0..=(w - w0) {
            let w2 = w - w0 - w1;
            for o0 in &tables[w0] {
                for o1 in &tables[w1] {
                    for o2 in &tables[w2] {
                        out.push(FockState {
                            charges,
                            occ: [o0.clone(), o1.clone(), o2.clone()],
                        });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// All basis states of weight ≤ `max_weight`.
pub fn basis_up_to(charges: Charges, max_weight: usize) -> Vec<FockState> {
    (0..=max_weight).flat_map(|w| basis(charges, w)).collect()
}

/// Number of basis states of weight `w`: the `q^w` coefficient of
/// `∏_{n≥1} (1-q^n)^{-3}`. Independent of the charges.
pub fn graded_dimension(w: usize) -> u64 {
    // multiply by 1/(1-q^n) three times for each n
    let mut series = vec![0u64; w + 1];
    series[0] = 1;
    for n in 1..=w {
        for _ in 0..3 {
            for i in n..=w {
                series[i] += series[i - n];
            }
        }
    }
    series[w]
}

/// Parses `aPhi[-1] achi[-2] |l,s,t>`; oscillators act right to left on the
/// charged vacuum. An optional leading rational coefficient is allowed.
pub fn parse_state(text: &str, level: &Level) -> Result<FockVector, FockError> {
    let err = |offset: usize, msg: &str| FockError::Syntax {
        offset,
        msg: msg.to_string(),
    };
    let bar = text.find('|').ok_or_else(|| err(text.len(), "expected '|l,s,t>'"))?;
    let close = text[bar..]
        .find('>')
        .map(|i| bar + i)
        .ok_or_else(|| err(text.len(), "expected '>'"))?;
    if !text[close + 1..].trim().is_empty() {
        return Err(err(close + 1, "trailing input after '>'"));
    }
    let parts: Vec<&str> = text[bar + 1..close].split(',').collect();
    if parts.len() != 3 {
        return Err(err(bar + 1, "expected three charges l,s,t"));
    }
    let l: Rational64 = parts[0].trim().parse().map_err(|_| err(bar + 1, "bad l charge"))?;
    let s: i64 = parts[1].trim().parse().map_err(|_| err(bar + 1, "bad s charge"))?;
    let t: i64 = parts[2].trim().parse().map_err(|_| err(bar + 1, "bad t charge"))?;
    let mut v = FockVector::vacuum(Charges::new(l, s, t));

    let head = &text[..bar];
    let mut ops: Vec<(usize, Boson, i64)> = Vec::new();
    let mut coeff: Option<Rational> = None;
    let mut pos = 0;
    for tok in head.split_whitespace() {
        let offset = head[pos..].find(tok).map(|i| i + pos).unwrap_or(pos);
        pos = offset + tok.len();
        let boson = Boson::ALL
            .into_iter()
            .find(|b| tok.starts_with(b.prefix()) && tok[b.prefix().len()..].starts_with('['));
        match boson {
            Some(b) => {
                let inner = tok[b.prefix().len() + 1..]
                    .strip_suffix(']')
                    .ok_or_else(|| err(offset, "expected ']'"))?;
                let n: i64 = inner.parse().map_err(|_| err(offset, "bad mode index"))?;
                ops.push((offset, b, n));
            }
            None if ops.is_empty() && coeff.is_none() => {
                coeff = Some(crate::scalar::parse_rational(tok).ok_or_else(|| err(offset, "unknown oscillator"))?);
            }
            None => return Err(err(offset, "unknown oscillator")),
        }
    }
    for (_, b, n) in ops.into_iter().rev() {
        v = apply_oscillator(b, &Oscillator::Mode(n), &v, level)?;
    }
    if let Some(c) = coeff {
        v = v.scaled(&Scalar::from_rational(c));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn vac(l: i64, s: i64, t: i64) -> FockVector {
        FockVector::vacuum(Charges::int(l, s, t))
    }

    fn osc(b: Boson, n: i64, v: &FockVector) -> FockVector {
        apply_oscillator(b, &Oscillator::Mode(n), v, &Level::Symbolic).unwrap()
    }

    #[test]
    fn heisenberg_examples() {
        let v = osc(Boson::Chi, 1, &osc(Boson::Chi, -1, &vac(0, 0, 0)));
        assert_eq!(v, vac(0, 0, 0));
        let v = osc(Boson::SmallPhi, 1, &osc(Boson::SmallPhi, -1, &vac(0, 0, 0)));
        assert_eq!(v, vac(0, 0, 0).scaled(&Scalar::from_int(-1)));
        let v = osc(Boson::BigPhi, 2, &osc(Boson::BigPhi, -2, &vac(1, 0, 0)));
        assert_eq!(v, vac(1, 0, 0).scaled(&(&Scalar::k() + &Scalar::from_int(2))));
    }

    #[test]
    fn charge_eigenvalues() {
        let lv = Level::Symbolic;
        let v = apply_oscillator(Boson::BigPhi, &Oscillator::ChargeEigen, &vac(1, 0, 0), &lv).unwrap();
        assert_eq!(v, vac(1, 0, 0).scaled(&Scalar::from_rational(rational(1, 2))));
        let v = apply_oscillator(Boson::SmallPhi, &Oscillator::ChargeEigen, &vac(0, 2, 0), &lv).unwrap();
        assert_eq!(v, vac(0, 2, 0).scaled(&Scalar::from_int(-2)));
        // exp(-2/(k+2) a_Φ) lowers l by 2
        let beta = &RatFunc::from_int(-2) / &lv.k_plus(2);
        let v = apply_oscillator(Boson::BigPhi, &Oscillator::ChargeExp(beta), &vac(1, 0, 0), &lv).unwrap();
        assert_eq!(v, vac(-1, 0, 0));
    }

    #[test]
    fn d_examples() {
        let lv = Level::Symbolic;
        assert!(apply_d(&vac(0, 0, 0), 1, &lv).unwrap().is_zero());
        let v = apply_d(&osc(Boson::Chi, -1, &vac(0, 0, 0)), 2, &lv).unwrap();
        assert_eq!(v, osc(Boson::Chi, -2, &vac(0, 0, 0)));
        let v = apply_d(&vac(0, 0, 1), 1, &lv).unwrap();
        assert_eq!(v, osc(Boson::Chi, -1, &vac(0, 0, 1)));
        assert!(matches!(apply_d(&vac(0, 0, 1), 0, &lv), Err(FockError::CapExceeded { .. })));
    }

    #[test]
    fn translate_creation_mode() {
        let lv = Level::Symbolic;
        assert_eq!(translate(&int(3), &vac(0, 0, 0), 4, &lv), vac(0, 0, 0));
        let v = translate(&int(1), &osc(Boson::BigPhi, -1, &vac(0, 0, 0)), 3, &lv);
        let mut expect = FockVector::zero();
        for n in 1..=3 {
            expect.add_assign(&osc(Boson::BigPhi, -n, &vac(0, 0, 0)));
        }
        assert_eq!(v, expect);
    }

    #[test]
    fn dimensions() {
        assert_eq!(graded_dimension(0), 1);
        assert_eq!(graded_dimension(1), 3);
        assert_eq!(graded_dimension(2), 9);
        for w in 0..7 {
            assert_eq!(basis(Charges::int(0, 0, 0), w).len() as u64, graded_dimension(w));
        }
    }

    #[test]
    fn state_syntax_round_trip() {
        let lv = Level::Symbolic;
        let v = parse_state("aPhi[-1] achi[-2] achi[-2] |1/2,0,-1>", &lv).unwrap();
        let (s, c) = v.iter().next().unwrap();
        assert_eq!(s.to_string(), "aPhi[-1] achi[-2] achi[-2] |1/2,0,-1>");
        assert!(c.is_one());
        assert!(parse_state("aPsi[-1] |0,0,0>", &lv).is_err());
        assert!(parse_state("|0,0>", &lv).is_err());
        let v = parse_state("achi[1] achi[-1] |0,0,0>", &lv).unwrap();
        assert_eq!(v, vac(0, 0, 0));
    }
}
