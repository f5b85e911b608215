use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{int, RatFunc, Rational, ScalarError};

/// The level `k` used to build operators: the indeterminate itself, or a
/// rational specialization `k0 ∉ {0, -2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Symbolic,
    Value(#[serde(with = "crate::serde_rational")] Rational),
}

impl Level {
    pub fn value(k0: Rational) -> Result<Self, ScalarError> {
        if k0 == int(0) || k0 == int(-2) {
            return Err(ScalarError::ExcludedLevel(k0));
        }
        Ok(Level::Value(k0))
    }

    /// `k` as a coefficient.
    pub fn k(&self) -> RatFunc {
        match self {
            Level::Symbolic => RatFunc::k(),
            Level::Value(k0) => RatFunc::from_rational(k0.clone()),
        }
    }

    /// `k + c`.
    pub fn k_plus(&self, c: i64) -> RatFunc {
        &self.k() + &RatFunc::from_int(c)
    }

    /// `a·k + b` with rational `a`, `b`.
    pub fn affine(&self, a: &Rational, b: &Rational) -> RatFunc {
        &self.k().scale(a) + &RatFunc::from_rational(b.clone())
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Level::Symbolic)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Symbolic => write!(f, "k"),
            Level::Value(k0) => write!(f, "{}", crate::scalar::render_rational(k0)),
        }
    }
}
