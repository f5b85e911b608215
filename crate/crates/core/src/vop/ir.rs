use std::fmt;

use thiserror::Error;

use crate::fock::{Boson, Charges};
use crate::scalar::{HShift, RatFunc, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Creation,
    Annihilation,
}

/// One oscillator half of a normal-ordered exponential.
///
/// * creation: `exp Σ_{n>0} (α/n) a_{X,-n} (ρu + Aħ)^n`
/// * annihilation: `exp Σ_{n>0} (α/n) a_{X,n} (u + Aħ)^{-n}`
///
/// `ρ` is 1 unless the leg is `u`-independent (`spectral == false`), which
/// only creation legs may be.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leg {
    pub boson: Boson,
    pub side: Side,
    pub alpha: RatFunc,
    pub shift: HShift,
    pub spectral: bool,
}

impl Leg {
    pub fn creation(boson: Boson, alpha: RatFunc, shift: HShift) -> Self {
        Leg {
            boson,
            side: Side::Creation,
            alpha,
            shift,
            spectral: true,
        }
    }

    pub fn annihilation(boson: Boson, alpha: RatFunc, shift: HShift) -> Self {
        Leg {
            boson,
            side: Side::Annihilation,
            alpha,
            shift,
            spectral: true,
        }
    }

    /// Creation leg with `(Aħ)^n` in place of `(u + Aħ)^n`.
    pub fn constant_creation(boson: Boson, alpha: RatFunc, shift: HShift) -> Self {
        Leg {
            spectral: false,
            ..Leg::creation(boson, alpha, shift)
        }
    }

    fn merge_key(&self) -> (Boson, Side, bool, &RatFunc) {
        (self.boson, self.side, self.spectral, &self.shift)
    }
}

/// `(u + Bħ)^{γ ∂_X + c}`, or a pure scalar power when `boson` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerFactor {
    pub boson: Option<Boson>,
    pub gamma: RatFunc,
    pub constant: RatFunc,
    pub shift: HShift,
}

impl PowerFactor {
    pub fn charge(boson: Boson, gamma: RatFunc, shift: HShift) -> Self {
        PowerFactor {
            boson: Some(boson),
            gamma,
            constant: RatFunc::zero(),
            shift,
        }
    }

    pub fn scalar(exponent: RatFunc, shift: HShift) -> Self {
        PowerFactor {
            boson: None,
            gamma: RatFunc::zero(),
            constant: exponent,
            shift,
        }
    }

    /// Exponent resolved on a vacuum with the given charges.
    pub fn exponent(&self, charges: &Charges) -> RatFunc {
        match self.boson {
            Some(b) if !self.gamma.is_zero() => &self.gamma.scale(&charges.eigenvalue(b)) + &self.constant,
            _ => self.constant.clone(),
        }
    }
}

/// A single normal-ordered product: creation legs, zero-mode exponentials
/// `e^{β a_X}`, power factors, annihilation legs, times `ħ^{-hbar_inverse}`.
/// The `ħ` division is carried out only after summing, and must be exact.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Primitive {
    pub hbar_inverse: u32,
    pub legs: Vec<Leg>,
    pub charges: Vec<(Boson, RatFunc)>,
    pub powers: Vec<PowerFactor>,
}

impl Primitive {
    pub fn identity() -> Self {
        Primitive::default()
    }

    pub fn with_leg(mut self, leg: Leg) -> Self {
        self.legs.push(leg);
        self
    }

    pub fn with_charge(mut self, boson: Boson, beta: RatFunc) -> Self {
        self.charges.push((boson, beta));
        self
    }

    pub fn with_power(mut self, p: PowerFactor) -> Self {
        self.powers.push(p);
        self
    }

    /// `:exp(β·X(u; A, B)):` for one boson: creation leg `β` at `A`,
    /// `e^{β a_X}`, `(u+Bħ)^{β ∂_X}`, annihilation leg `-β` at `B`.
    pub fn exp_field(boson: Boson, beta: RatFunc, a: HShift, b: HShift) -> Self {
        Primitive::identity()
            .with_leg(Leg::creation(boson, beta.clone(), a))
            .with_charge(boson, beta.clone())
            .with_power(PowerFactor::charge(boson, beta.clone(), b.clone()))
            .with_leg(Leg::annihilation(boson, -&beta, b))
    }

    /// Bosons touched by legs, zero modes or charge-dependent powers.
    pub fn support(&self) -> Vec<Boson> {
        let mut v: Vec<Boson> = self
            .legs
            .iter()
            .map(|l| l.boson)
            .chain(self.charges.iter().map(|c| c.0))
            .chain(self.powers.iter().filter(|p| !p.gamma.is_zero()).filter_map(|p| p.boson))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Sum of the resolved power exponents.
    pub fn total_power(&self, charges: &Charges) -> RatFunc {
        self.powers.iter().fold(RatFunc::zero(), |acc, p| &acc + &p.exponent(charges))
    }

    /// Shifts every `u`-dependent argument `u ↦ u + cħ`.
    pub fn shifted(&self, c: &HShift) -> Self {
        let mut p = self.clone();
        for leg in &mut p.legs {
            if leg.spectral {
                leg.shift = &leg.shift + c;
            }
        }
        for pw in &mut p.powers {
            pw.shift = &pw.shift + c;
        }
        p
    }

    /// Merges legs with equal (boson, side, shift) and zero modes of equal
    /// boson, drops trivial pieces, and sorts into canonical order.
    pub fn canonical(&self) -> Self {
        let mut legs: Vec<Leg> = Vec::new();
        for leg in &self.legs {
            match legs.iter_mut().find(|l| l.merge_key() == leg.merge_key()) {
                Some(l) => l.alpha = &l.alpha + &leg.alpha,
                None => legs.push(leg.clone()),
            }
        }
        legs.retain(|l| !l.alpha.is_zero());
        legs.sort_by_cached_key(|l| (l.boson, l.side, !l.spectral, l.shift.to_string()));

        let mut charges: Vec<(Boson, RatFunc)> = Vec::new();
        for (b, beta) in &self.charges {
            match charges.iter_mut().find(|c| c.0 == *b) {
                Some(c) => c.1 = &c.1 + beta,
                None => charges.push((*b, beta.clone())),
            }
        }
        charges.retain(|c| !c.1.is_zero());
        charges.sort_by_key(|c| c.0);

        let mut powers: Vec<PowerFactor> = Vec::new();
        for p in &self.powers {
            let key = (p.boson.filter(|_| !p.gamma.is_zero()), &p.shift);
            match powers
                .iter_mut()
                .find(|q| (q.boson.filter(|_| !q.gamma.is_zero()), &q.shift) == key)
            {
                Some(q) => {
                    q.gamma = &q.gamma + &p.gamma;
                    q.constant = &q.constant + &p.constant;
                }
                None => powers.push(p.clone()),
            }
        }
        for p in &mut powers {
            if p.gamma.is_zero() {
                p.boson = None;
            }
        }
        powers.retain(|p| !(p.gamma.is_zero() && p.constant.is_zero()));
        powers.sort_by_cached_key(|p| (p.boson, p.shift.to_string()));

        Primitive {
            hbar_inverse: self.hbar_inverse,
            legs,
            charges,
            powers,
        }
    }

    /// Homogeneity data of this primitive on a given vacuum.
    pub fn homogeneity(&self, charges: &Charges) -> Result<Homogeneity, VopError> {
        let p = self.total_power(charges);
        let power = p
            .as_rational()
            .filter(Rational::is_integer)
            .and_then(|q| num_traits::ToPrimitive::to_i64(q.numer()))
            .ok_or_else(|| VopError::NonSingleValued {
                exponent: p.to_string(),
                charges: charges.to_string(),
            })?;
        Ok(Homogeneity {
            power,
            hbar_inverse: self.hbar_inverse,
        })
    }
}

/// Under `u ↦ λu, ħ ↦ λħ, a_{X,n} ↦ λ^n a_{X,n}` every primitive is
/// homogeneous, so the coefficient of `u^{-m-1}` between basis states of
/// weights `w_in` and `w_out` is a single monomial `c·ħ^E` with
/// `E = power − hbar_inverse + w_out − w_in + m + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Homogeneity {
    /// Total resolved `u`-exponent of the power factors.
    pub power: i64,
    pub hbar_inverse: u32,
}

impl Homogeneity {
    pub fn exponent(&self, w_in: usize, w_out: usize, m: i64) -> i64 {
        self.exponent_before_division(w_in, w_out, m) - self.hbar_inverse as i64
    }

    /// Exponent before the deferred `1/ħ^n`; never negative for a nonzero
    /// matrix element.
    pub fn exponent_before_division(&self, w_in: usize, w_out: usize, m: i64) -> i64 {
        self.power + w_out as i64 - w_in as i64 + m + 1
    }

    /// Largest `w_in − w_out` with a possibly nonzero matrix element.
    pub fn max_weight_drop(&self, m: i64) -> i64 {
        self.power + m + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VopError {
    #[error("product factors share boson {0:?}")]
    OverlappingProduct(Boson),
    #[error("exponent {exponent} is not an integer on {charges}: operator is not single valued there")]
    NonSingleValued { exponent: String, charges: String },
}

/// Expression tree over primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VopExpr {
    Prim(Primitive),
    ScalarMul(Scalar, Box<VopExpr>),
    /// `ħ^{-1}·e`, divided exactly after evaluation.
    InvHbar(Box<VopExpr>),
    Sum(Vec<VopExpr>),
    /// `e(u) ↦ e(u + cħ)`.
    UShift(HShift, Box<VopExpr>),
    /// `(e(u + αħ) − e(u)) / ħ`.
    DifferenceQuotient(Rational, Box<VopExpr>),
    /// Product of factors with pairwise disjoint boson supports.
    Product(Vec<VopExpr>),
}

impl VopExpr {
    pub fn prim(p: Primitive) -> Self {
        VopExpr::Prim(p)
    }

    pub fn scaled(self, c: Scalar) -> Self {
        VopExpr::ScalarMul(c, Box::new(self))
    }

    pub fn shifted(self, c: HShift) -> Self {
        VopExpr::UShift(c, Box::new(self))
    }

    pub fn over_hbar(self) -> Self {
        VopExpr::InvHbar(Box::new(self))
    }

    pub fn difference(alpha: Rational, e: VopExpr) -> Self {
        VopExpr::DifferenceQuotient(alpha, Box::new(e))
    }

    /// Flattens to a weighted sum of canonical primitives.
    pub fn normalize(&self) -> Result<NormalForm, VopError> {
        let terms = self.flatten()?;
        Ok(NormalForm::from_terms(terms))
    }

    fn flatten(&self) -> Result<Vec<(Scalar, Primitive)>, VopError> {
        Ok(match self {
            VopExpr::Prim(p) => vec![(Scalar::one(), p.clone())],
            VopExpr::ScalarMul(c, e) => e.flatten()?.into_iter().map(|(w, p)| (&w * c, p)).collect(),
            VopExpr::InvHbar(e) => e
                .flatten()?
                .into_iter()
                .map(|(w, mut p)| {
                    p.hbar_inverse += 1;
                    (w, p)
                })
                .collect(),
            VopExpr::Sum(es) => {
                let mut out = Vec::new();
                for e in es {
                    out.extend(e.flatten()?);
                }
                out
            }
            VopExpr::UShift(c, e) => e.flatten()?.into_iter().map(|(w, p)| (w, p.shifted(c))).collect(),
            VopExpr::DifferenceQuotient(alpha, e) => {
                let inner = e.flatten()?;
                let shift = RatFunc::from_rational(alpha.clone());
                let mut out = Vec::with_capacity(2 * inner.len());
                for (w, p) in inner {
                    let mut up = p.shifted(&shift);
                    up.hbar_inverse += 1;
                    let mut down = p;
                    down.hbar_inverse += 1;
                    out.push((w.clone(), up));
                    out.push((-&w, down));
                }
                out
            }
            VopExpr::Product(factors) => {
                let mut acc: Vec<(Scalar, Primitive)> = vec![(Scalar::one(), Primitive::identity())];
                let mut seen: Vec<Boson> = Vec::new();
                for f in factors {
                    let terms = f.flatten()?;
                    let mut sup: Vec<Boson> = terms.iter().flat_map(|(_, p)| p.support()).collect();
                    sup.sort();
                    sup.dedup();
                    if let Some(b) = sup.iter().find(|b| seen.contains(b)) {
                        return Err(VopError::OverlappingProduct(*b));
                    }
                    seen.extend(sup);
                    let mut next = Vec::with_capacity(acc.len() * terms.len());
                    for (wa, pa) in &acc {
                        for (wb, pb) in &terms {
                            let mut p = pa.clone();
                            p.hbar_inverse += pb.hbar_inverse;
                            p.legs.extend(pb.legs.iter().cloned());
                            p.charges.extend(pb.charges.iter().cloned());
                            p.powers.extend(pb.powers.iter().cloned());
                            next.push((wa * wb, p));
                        }
                    }
                    acc = next;
                }
                acc
            }
        })
    }
}

/// A flat `Σ w_i · P_i` with canonical, pairwise distinct primitives.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NormalForm {
    pub terms: Vec<(Scalar, Primitive)>,
}

impl NormalForm {
    pub fn from_terms(terms: Vec<(Scalar, Primitive)>) -> Self {
        let mut out: Vec<(Scalar, Primitive)> = Vec::new();
        for (w, p) in terms {
            let p = p.canonical();
            match out.iter_mut().find(|(_, q)| *q == p) {
                Some((acc, _)) => *acc = &*acc + &w,
                None => out.push((w, p)),
            }
        }
        out.retain(|(w, _)| !w.is_zero());
        out.sort_by_cached_key(|(_, p)| p.to_string());
        NormalForm { terms: out }
    }

    pub fn into_expr(self) -> VopExpr {
        VopExpr::Sum(self.terms.into_iter().map(|(w, p)| VopExpr::Prim(p).scaled(w)).collect())
    }

    /// Largest weight drop of mode `m` over all primitives on `charges`.
    pub fn max_weight_drop(&self, charges: &Charges, m: i64) -> Result<i64, VopError> {
        let mut best = i64::MIN;
        for (_, p) in &self.terms {
            best = best.max(p.homogeneity(charges)?.max_weight_drop(m));
        }
        Ok(best)
    }
}

fn boson_name(b: Boson) -> &'static str {
    match b {
        Boson::BigPhi => "Phi",
        Boson::SmallPhi => "phi",
        Boson::Chi => "chi",
    }
}

impl fmt::Display for Primitive {
    /// e.g. `h^-1 C[chi](-1; -k - 1) Z[chi](-1) P[chi](-1; -k - 2) A[chi](1; -k - 2)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.hbar_inverse > 0 {
            parts.push(format!("h^-{}", self.hbar_inverse));
        }
        for leg in self.legs.iter().filter(|l| l.side == Side::Creation) {
            let tag = if leg.spectral { "C" } else { "C0" };
            parts.push(format!("{tag}[{}]({}; {})", boson_name(leg.boson), leg.alpha, leg.shift));
        }
        for (b, beta) in &self.charges {
            parts.push(format!("Z[{}]({})", boson_name(*b), beta));
        }
        for p in &self.powers {
            match p.boson {
                Some(b) => parts.push(format!("P[{}]({}, {}; {})", boson_name(b), p.gamma, p.constant, p.shift)),
                None => parts.push(format!("P[1]({}; {})", p.constant, p.shift)),
            }
        }
        for leg in self.legs.iter().filter(|l| l.side == Side::Annihilation) {
            parts.push(format!("A[{}]({}; {})", boson_name(leg.boson), leg.alpha, leg.shift));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{w} * {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn chi_prim(shift: i64) -> Primitive {
        Primitive::exp_field(
            Boson::Chi,
            RatFunc::from_int(-1),
            RatFunc::from_int(shift),
            RatFunc::from_int(shift),
        )
    }

    #[test]
    fn shift_additivity() {
        let p = chi_prim(0);
        let e = VopExpr::prim(p.clone())
            .shifted(RatFunc::from_int(2))
            .shifted(RatFunc::from_int(3));
        let nf = e.normalize().unwrap();
        assert_eq!(nf.terms.len(), 1);
        assert_eq!(nf.terms[0].1, p.shifted(&RatFunc::from_int(5)).canonical());
    }

    #[test]
    fn zero_pruning() {
        let p = VopExpr::prim(chi_prim(0));
        let q = VopExpr::prim(chi_prim(1)).scaled(Scalar::zero());
        let nf = VopExpr::Sum(vec![p.clone(), q]).normalize().unwrap();
        assert_eq!(nf, p.normalize().unwrap());
        assert_eq!(nf.terms[0].0, Scalar::one());
    }

    #[test]
    fn difference_quotient_unfolds() {
        let nf = VopExpr::difference(int(1), VopExpr::prim(chi_prim(-2))).normalize().unwrap();
        assert_eq!(nf.terms.len(), 2);
        assert!(nf.terms.iter().all(|(_, p)| p.hbar_inverse == 1));
        let weights: Vec<Scalar> = nf.terms.iter().map(|t| t.0.clone()).collect();
        assert!(weights.contains(&Scalar::one()) && weights.contains(&Scalar::from_int(-1)));
    }

    #[test]
    fn overlapping_product_rejected() {
        let e = VopExpr::Product(vec![VopExpr::prim(chi_prim(0)), VopExpr::prim(chi_prim(1))]);
        assert_eq!(e.normalize(), Err(VopError::OverlappingProduct(Boson::Chi)));
    }

    #[test]
    fn normalize_is_idempotent() {
        let e = VopExpr::Product(vec![
            VopExpr::difference(int(1), VopExpr::prim(chi_prim(-2))),
            VopExpr::prim(Primitive::exp_field(
                Boson::SmallPhi,
                RatFunc::from_int(-1),
                RatFunc::from_int(-1),
                RatFunc::from_int(-2),
            )),
        ])
        .scaled(Scalar::from_int(-1));
        let nf = e.normalize().unwrap();
        assert_eq!(nf.clone().into_expr().normalize().unwrap(), nf);
    }

    #[test]
    fn identity_homogeneity() {
        let h = Primitive::identity().homogeneity(&Charges::int(0, 0, 0)).unwrap();
        // identity has only the u^0 coefficient, i.e. mode -1
        assert_eq!(h.exponent(2, 2, -1), 0);
        assert_eq!(h.max_weight_drop(-1), 0);
    }
}
