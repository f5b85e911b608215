//! Truncated power series in the homogeneous variable `t = ħ/u`.
//!
//! Every factor of a normal-ordered vertex operator is homogeneous under
//! `u ↦ λu, ħ ↦ λħ`, so after pulling out its `u`-degree it becomes a power
//! series in `t`. Extracting a `u`-mode then means reading off one
//! coefficient of a product of such series.

use crate::scalar::{gen_binomial, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    /// `coeffs[j]` multiplies `t^j`; length is the truncation order plus one.
    coeffs: Vec<RatFunc>,
}

impl Series {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![RatFunc::zero(); order + 1];
        coeffs[0] = RatFunc::one();
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![RatFunc::zero(); order + 1],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<RatFunc>, order: usize) -> Self {
        coeffs.resize(order + 1, RatFunc::zero());
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> RatFunc {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    /// `(1 + b t)^p`, truncated.
    pub fn binomial(b: &RatFunc, p: &RatFunc, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut bpow = RatFunc::one();
        for j in 0..=order {
            if j > 0 {
                if b.is_zero() {
                    coeffs.resize(order + 1, RatFunc::zero());
                    break;
                }
                bpow = &bpow * b;
            }
            coeffs.push(&gen_binomial(p, j as u32) * &bpow);
        }
        Series { coeffs }
    }

    /// `(ρ + b t)^n` for a non-negative integer `n`, with `ρ ∈ {0, 1}`.
    pub fn linear_power(rho: bool, b: &RatFunc, n: u32, order: usize) -> Self {
        if rho {
            return Self::binomial(b, &RatFunc::from_int(n as i64), order);
        }
        let mut s = Self::zero(order);
        if (n as usize) <= order {
            s.coeffs[n as usize] = b.pow(n);
        }
        s
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series {
            coeffs: (0..=order).map(|j| &self.coeffs[j] + &other.coeffs[j]).collect(),
        }
    }

    /// Product truncated to the smaller order.
    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut out = vec![RatFunc::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Series { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series::from_coeffs(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    /// `[t^e] (self · other)` without forming the product.
    pub fn product_coeff(&self, other: &Series, e: usize) -> RatFunc {
        let mut acc = RatFunc::zero();
        for j in 0..=e {
            let (a, b) = match (self.coeffs.get(j), other.coeffs.get(e - j)) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = &acc + &(a * b);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_inverse() {
        // (1 + 2t)^{-1} (1 + 2t) = 1
        let b = RatFunc::from_int(2);
        let a = Series::binomial(&b, &RatFunc::from_int(-1), 6);
        let c = Series::binomial(&b, &RatFunc::from_int(1), 6);
        assert_eq!(a.mul(&c), Series::one(6));
    }

    #[test]
    fn half_powers_square() {
        let b = &RatFunc::k() + &RatFunc::one();
        let h = Series::binomial(&b, &RatFunc::from_ratio(1, 2), 5);
        assert_eq!(h.mul(&h), Series::binomial(&b, &RatFunc::one(), 5));
    }

    #[test]
    fn pure_shift_power() {
        let s = Series::linear_power(false, &RatFunc::from_int(3), 2, 4);
        assert_eq!(s.coeff(2), RatFunc::from_int(9));
        assert!(s.coeff(1).is_zero());
    }
}
