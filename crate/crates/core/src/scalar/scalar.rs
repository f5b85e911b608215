use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{RatFunc, ScalarError};

/// Element of `Frac(ℚ[k])[ħ]`, stored sparsely as `(ħ-power, coefficient)`
/// pairs in increasing power order, zero coefficients absent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(u32, RatFunc)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RatFunc::one())
    }

    pub fn hbar() -> Self {
        Self::monomial(RatFunc::one(), 1)
    }

    pub fn k() -> Self {
        Self::from_ratfunc(RatFunc::k())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_ratfunc(RatFunc::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_ratfunc(RatFunc::from_rational(c))
    }

    pub fn from_ratfunc(c: RatFunc) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · ħ^power`.
    pub fn monomial(c: RatFunc, power: u32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Scalar { terms: vec![(power, c)] }
        }
    }

    /// Builds from arbitrary `(power, coefficient)` pairs, merging repeats.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, RatFunc)>) -> Self {
        let mut v: Vec<(u32, RatFunc)> = terms.into_iter().collect();
        v.sort_by_key(|(p, _)| *p);
        let mut out: Vec<(u32, RatFunc)> = Vec::with_capacity(v.len());
        for (p, c) in v {
            match out.last_mut() {
                Some((lp, lc)) if *lp == p => *lc = &*lc + &c,
                _ => out.push((p, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Scalar { terms: out }
    }

    pub fn terms(&self) -> &[(u32, RatFunc)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Coefficient of `ħ^power`.
    pub fn coeff(&self, power: u32) -> RatFunc {
        self.terms
            .iter()
            .find(|(p, _)| *p == power)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn hbar_degree(&self) -> Option<u32> {
        self.terms.last().map(|(p, _)| *p)
    }

    pub fn lowest_hbar_power(&self) -> Option<u32> {
        self.terms.first().map(|(p, _)| *p)
    }

    /// Single-term scalars: `Some((c, e))` for `c · ħ^e`.
    pub fn as_monomial(&self) -> Option<(&RatFunc, u32)> {
        match self.terms.as_slice() {
            [(p, c)] => Some((c, *p)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(p, x)| (*p, x * c)).collect(),
        }
    }

    pub fn scale_q(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(p, x)| (*p, x.scale(c))).collect(),
        }
    }

    /// Multiplies by `ħ^e`.
    pub fn shift_hbar(&self, e: u32) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(p, c)| (p + e, c.clone())).collect(),
        }
    }

    /// Exact division by `ħ`. Fails if the `ħ`-constant term is nonzero.
    pub fn divide_by_hbar(&self) -> Result<Self, ScalarError> {
        if let Some((0, c)) = self.terms.first() {
            return Err(ScalarError::NonDivisible(c.to_string()));
        }
        Ok(Scalar {
            terms: self.terms.iter().map(|(p, c)| (p - 1, c.clone())).collect(),
        })
    }

    /// Exact division in `Frac(ℚ[k])[ħ]`.
    ///
    /// Division by an `ħ`-free scalar is field division; otherwise the
    /// quotient must be a polynomial in `ħ`.
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some((c, e)) = rhs.as_monomial() {
            let inv = c.recip()?;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (p, x) in &self.terms {
                if *p < e {
                    return Err(ScalarError::NotInRing);
                }
                terms.push((p - e, x * &inv));
            }
            return Ok(Scalar { terms });
        }
        // Long division from the top degree.
        let (dtop, dlead) = rhs.terms.last().unwrap();
        let lead_inv = dlead.recip()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rtop, rlead)) = rem.terms.last().cloned() {
            if rtop < *dtop {
                return Err(ScalarError::NotInRing);
            }
            let c = &rlead * &lead_inv;
            let e = rtop - dtop;
            rem = &rem - &rhs.scale(&c).shift_hbar(e);
            quot.push((e, c));
        }
        Ok(Scalar::from_terms(quot))
    }

    /// Substitutes `k = k0`, leaving `ħ` symbolic.
    pub fn specialize_k(&self, k0: &BigRational) -> Result<Self, ScalarError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (p, c) in &self.terms {
            terms.push((*p, RatFunc::from_rational(c.eval(k0)?)));
        }
        Ok(Scalar::from_terms(terms))
    }

    /// Substitutes `ħ = h0`, leaving a function of `k`.
    pub fn at_hbar(&self, h0: &BigRational) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (p, c) in &self.terms {
            acc = &acc + &c.scale(&pow_q(h0, *p));
        }
        acc
    }

    /// Substitutes `k = k0` and `ħ = h0`.
    pub fn eval(&self, k0: &BigRational, h0: &BigRational) -> Result<BigRational, ScalarError> {
        let mut acc = BigRational::zero();
        for (p, c) in &self.terms {
            acc += c.eval(k0)? * pow_q(h0, *p);
        }
        Ok(acc)
    }

    /// Value as a rational if the scalar is free of `k` and `ħ`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => c.as_rational(),
            _ => None,
        }
    }

    pub fn eval_f64(&self, k0: &BigRational, h0: &BigRational) -> Result<f64, ScalarError> {
        Ok(self.eval(k0, h0)?.to_f64().unwrap_or(f64::NAN))
    }
}

pub(crate) fn pow_q(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::from_integer(1.into());
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn merge(a: &Scalar, b: &Scalar, negate_b: bool) -> Scalar {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let pa = a.terms.get(i).map(|t| t.0);
        let pb = b.terms.get(j).map(|t| t.0);
        match (pa, pb) {
            (Some(x), Some(y)) if x == y => {
                let c = if negate_b {
                    &a.terms[i].1 - &b.terms[j].1
                } else {
                    &a.terms[i].1 + &b.terms[j].1
                };
                if !c.is_zero() {
                    out.push((x, c));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            _ => {
                let (p, c) = &b.terms[j];
                out.push((*p, if negate_b { -c } else { c.clone() }));
                j += 1;
            }
        }
    }
    Scalar { terms: out }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        merge(self, rhs, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        merge(self, rhs, true)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if let Some((c, e)) = rhs.as_monomial() {
            return self.scale(c).shift_hbar(e);
        }
        if let Some((c, e)) = self.as_monomial() {
            return rhs.scale(c).shift_hbar(e);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (pa, ca) in &self.terms {
            for (pb, cb) in &rhs.terms {
                terms.push((pa + pb, ca * cb));
            }
        }
        Scalar::from_terms(terms)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_int(c)
    }
}

impl From<RatFunc> for Scalar {
    fn from(c: RatFunc) -> Self {
        Scalar::from_ratfunc(c)
    }
}

impl fmt::Display for Scalar {
    /// Canonical rendering: `0`, or `ħ`-ordered terms `(c)`, `(c)*h`,
    /// `(c)*h^e` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match p {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*h")?,
                _ => write!(f, "({c})*h^{p}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use proptest::prelude::*;

    fn kp(c: i64) -> Scalar {
        &Scalar::k() + &Scalar::from_int(c)
    }

    #[test]
    fn field_examples() {
        let two = Scalar::from_int(2);
        let half = two.checked_div(&Scalar::from_int(4)).unwrap();
        assert_eq!(&(&kp(2) * &half) * &two, kp(2));
        let r = &Scalar::one() - &Scalar::k().checked_div(&kp(2)).unwrap();
        assert_eq!(r, two.checked_div(&kp(2)).unwrap());
        assert_eq!(r.specialize_k(&int(3)).unwrap(), Scalar::from_rational(rational(2, 5)));
    }

    #[test]
    fn hbar_division() {
        let a = &Scalar::hbar() * &kp(1);
        assert_eq!(a.divide_by_hbar().unwrap(), kp(1));
        let b = Scalar::monomial(RatFunc::from_int(2), 2);
        assert_eq!(b.divide_by_hbar().unwrap(), Scalar::monomial(RatFunc::from_int(2), 1));
        let c = &Scalar::one() + &Scalar::hbar();
        assert!(matches!(c.divide_by_hbar(), Err(ScalarError::NonDivisible(_))));
        assert!(matches!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        ));
    }

    #[test]
    fn polynomial_division_in_hbar() {
        let a = &kp(1) + &Scalar::hbar();
        let b = &Scalar::hbar() - &kp(3);
        let p = &a * &b;
        assert_eq!(p.checked_div(&b).unwrap(), a);
        assert!(matches!(a.checked_div(&b), Err(ScalarError::NotInRing)));
    }

    #[test]
    fn rendering() {
        assert_eq!(Scalar::zero().to_string(), "0");
        let s = &Scalar::from_int(2).checked_div(&kp(2)).unwrap() + &Scalar::monomial(RatFunc::k(), 2);
        assert_eq!(s.to_string(), "((2)/(k + 2)) + ((k))*h^2");
    }

    fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
        (prop::collection::vec(-4i64..5, 0..3), -3i64..4).prop_map(|(cs, root)| {
            let num = crate::scalar::KPoly::from_coeffs(cs.into_iter().map(int).collect());
            let den = crate::scalar::KPoly::from_coeffs(vec![int(root), int(1)]);
            RatFunc::new(num, den).unwrap()
        })
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((0u32..3, arb_ratfunc()), 0..3).prop_map(Scalar::from_terms)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn canonical_form_idempotent(a in arb_ratfunc()) {
            let again = RatFunc::new(a.numer().clone(), a.denom().clone()).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn specialization_is_homomorphism(a in arb_scalar(), b in arb_scalar(), which in 0usize..3) {
            let k0 = [int(1), int(3), rational(5, 2)][which].clone();
            // skip poles of the random denominators
            if let (Ok(sa), Ok(sb)) = (a.specialize_k(&k0), b.specialize_k(&k0)) {
                prop_assert_eq!((&a + &b).specialize_k(&k0).unwrap(), &sa + &sb);
                prop_assert_eq!((&a * &b).specialize_k(&k0).unwrap(), &sa * &sb);
            }
        }
    }
}
