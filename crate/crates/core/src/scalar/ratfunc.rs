//! Rational functions in `k` over the rationals, kept in lowest terms with a
//! monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::kpoly::KPoly;
use super::ScalarError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: KPoly,
    den: KPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: KPoly::zero(),
            den: KPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(KPoly::one())
    }

    pub fn k() -> Self {
        Self::from_poly(KPoly::k())
    }

    pub fn from_poly(num: KPoly) -> Self {
        RatFunc { num, den: KPoly::one() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(KPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(KPoly::from_int(c))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: KPoly, den: KPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: KPoly, den: KPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let c = den.as_constant().unwrap();
            if c.is_one() {
                return RatFunc { num, den };
            }
            return RatFunc {
                num: num.scale(&c.recip()),
                den: KPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &KPoly {
        &self.num
    }

    pub fn denom(&self) -> &KPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// Value if this rational function is a constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Substitutes `k = k0`.
    pub fn eval(&self, k0: &BigRational) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(k0);
        if d.is_zero() {
            return Err(ScalarError::SingularSpecialization(k0.clone()));
        }
        Ok(self.num.eval(k0) / d)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = RatFunc::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::normalized(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc {
                num: &self.num * &rhs.num,
                den: KPoly::one(),
            };
        }
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::checked_div`] otherwise.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(RatFunc, Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

impl From<BigRational> for RatFunc {
    fn from(c: BigRational) -> Self {
        RatFunc::from_rational(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.is_constant() {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(c: i64) -> RatFunc {
        &RatFunc::k() + &RatFunc::from_int(c)
    }

    #[test]
    fn common_denominator() {
        // 1 - k/(k+2) = 2/(k+2)
        let r = &RatFunc::one() - &(&RatFunc::k() / &kp(2));
        assert_eq!(r, &RatFunc::from_int(2) / &kp(2));
        assert_eq!(r.to_string(), "(2)/(k + 2)");
    }

    #[test]
    fn cancels_to_polynomial() {
        let r = &(&kp(2) / &RatFunc::from_int(2)) * &RatFunc::from_int(2);
        assert_eq!(r, kp(2));
        let r = &(&kp(2) * &kp(1)) / &kp(2);
        assert_eq!(r, kp(1));
        assert!(r.denom().is_one());
    }

    #[test]
    fn specialization() {
        let r = &RatFunc::from_int(2) / &kp(2);
        assert_eq!(
            r.eval(&BigRational::from_integer(3.into())).unwrap(),
            BigRational::new(2.into(), 5.into())
        );
        assert!(r.eval(&BigRational::from_integer((-2).into())).is_err());
    }
}
