//! Exact coefficient arithmetic.
//!
//! A [`Scalar`] is a polynomial in `ħ` whose coefficients are rational
//! functions of the level `k` ([`RatFunc`]). `ħ` is never inverted globally:
//! the only way to divide by it is [`Scalar::divide_by_hbar`], which fails
//! unless the division is exact.

mod kpoly;
mod ratfunc;
#[allow(clippy::module_inception)]
mod scalar;

pub use kpoly::KPoly;
pub use ratfunc::RatFunc;
pub(crate) use scalar::pow_q;
pub use scalar::Scalar;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// A shift coefficient `A` standing for the displacement `A·ħ` of the
/// spectral parameter.
pub type HShift = RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible by h: constant term {0} is nonzero")]
    NonDivisible(String),
    #[error("quotient is not a polynomial in h")]
    NotInRing,
    #[error("specialization k = {0} hits a pole")]
    SingularSpecialization(Rational),
    #[error("level k = {0} is excluded (k must avoid 0 and -2)")]
    ExcludedLevel(Rational),
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Generalized binomial coefficient `r (r-1) ... (r-j+1) / j!`.
pub fn gen_binomial(r: &RatFunc, j: u32) -> RatFunc {
    let mut acc = RatFunc::one();
    for i in 0..j {
        let factor = r - &RatFunc::from_int(i as i64);
        acc = (&acc * &factor).scale(&rational(1, i as i64 + 1));
    }
    acc
}

/// Rational-valued generalized binomial coefficient.
pub fn gen_binomial_q(r: &Rational, j: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j {
        acc = acc * (r - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Ordinary binomial coefficient as a rational.
pub fn binomial(n: u32, j: u32) -> Rational {
    if j > n {
        return Rational::zero();
    }
    gen_binomial_q(&int(n as i64), j)
}

pub fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, i| acc * int(i))
}

/// Parses `"3"`, `"-1/2"` and similar literals.
pub fn parse_rational(text: &str) -> Option<Rational> {
    text.trim().parse::<Rational>().ok()
}

pub fn render_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_binomial_examples() {
        let r = &RatFunc::k() + &RatFunc::from_int(1);
        assert_eq!(gen_binomial(&r, 0), RatFunc::one());
        assert_eq!(gen_binomial(&RatFunc::from_ratio(1, 2), 2), RatFunc::from_ratio(-1, 8));
        assert_eq!(gen_binomial(&RatFunc::from_int(-1), 3), RatFunc::from_int(-1));
        assert_eq!(gen_binomial_q(&rational(1, 2), 2), rational(-1, 8));
        assert_eq!(binomial(5, 2), int(10));
    }

    #[test]
    fn symbolic_binomial_matches_falling_factorial() {
        // C(k, 2) = k(k-1)/2
        let k = RatFunc::k();
        let expect = (&k * &(&k - &RatFunc::one())).scale(&rational(1, 2));
        assert_eq!(gen_binomial(&k, 2), expect);
    }
}
