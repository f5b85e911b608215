//! Free-field expressions for the currents, the `ξη` system, the screening
//! current and the bosonized vertex operators.

use crate::fock::Boson;
use crate::level::Level;
use crate::scalar::{HShift, RatFunc, Rational, Scalar};
use crate::vop::{Leg, PowerFactor, Primitive, VopExpr};

fn q(n: i64) -> RatFunc {
    RatFunc::from_int(n)
}

/// `-(k + c)` as a shift.
fn minus_k(level: &Level, c: i64) -> HShift {
    -level.k_plus(c)
}

fn prim(p: Primitive) -> VopExpr {
    VopExpr::Prim(p)
}

fn field(boson: Boson, beta: i64, a: HShift, b: HShift) -> VopExpr {
    prim(Primitive::exp_field(boson, q(beta), a, b))
}

/// `2/(k+2)`.
fn two_over(level: &Level) -> RatFunc {
    &q(2) / &level.k_plus(2)
}

/// `e(u) = -:[₁∂_u exp{-χ(u; -(k+2))}] exp{-φ(u; -(k+1), -(k+2))}:`
pub fn e(level: &Level) -> VopExpr {
    let chi = VopExpr::difference(
        Rational::from_integer(1.into()),
        field(Boson::Chi, -1, minus_k(level, 2), minus_k(level, 2)),
    );
    let phi = field(Boson::SmallPhi, -1, minus_k(level, 1), minus_k(level, 2));
    VopExpr::Product(vec![chi, phi]).scaled(Scalar::from_int(-1))
}

/// `f(u) = (1/ħ)(T₁ - T₂)`.
pub fn f(level: &Level) -> VopExpr {
    let t1 = Primitive::identity()
        .with_leg(Leg::annihilation(Boson::BigPhi, q(1), q(-2)))
        .with_leg(Leg::annihilation(Boson::BigPhi, q(-1), q(0)))
        .with_power(PowerFactor::charge(Boson::BigPhi, q(1), q(0)))
        .with_power(PowerFactor::charge(Boson::BigPhi, q(-1), q(-2)));
    let t1 = VopExpr::Product(vec![
        prim(t1),
        field(Boson::SmallPhi, 1, q(-1), q(0)),
        field(Boson::Chi, 1, q(-1), q(-1)),
    ]);
    let a = two_over(level);
    let t2 = Primitive::identity()
        .with_leg(Leg::creation(Boson::BigPhi, a.clone(), minus_k(level, 3)))
        .with_leg(Leg::creation(Boson::BigPhi, -&a, q(-1)));
    let t2 = VopExpr::Product(vec![
        prim(t2),
        field(Boson::SmallPhi, 1, minus_k(level, 3), minus_k(level, 2)),
        field(Boson::Chi, 1, minus_k(level, 2), minus_k(level, 2)),
    ]);
    VopExpr::Sum(vec![t1, t2.scaled(Scalar::from_int(-1))]).over_hbar()
}

/// `h⁺(u)`: annihilation legs and ratio powers in `Φ` and `φ`.
pub fn hp(level: &Level) -> VopExpr {
    let mut p = Primitive::identity();
    for b in [Boson::BigPhi, Boson::SmallPhi] {
        p = p
            .with_leg(Leg::annihilation(b, q(1), minus_k(level, 2)))
            .with_leg(Leg::annihilation(b, q(-1), minus_k(level, 0)))
            .with_power(PowerFactor::charge(b, q(1), minus_k(level, 0)))
            .with_power(PowerFactor::charge(b, q(-1), minus_k(level, 2)));
    }
    prim(p)
}

/// `h⁻(u)`: creation legs in `Φ` and `φ`.
pub fn hm(level: &Level) -> VopExpr {
    let a = two_over(level);
    let p = Primitive::identity()
        .with_leg(Leg::creation(Boson::BigPhi, a.clone(), minus_k(level, 3)))
        .with_leg(Leg::creation(Boson::BigPhi, -&a, q(-1)))
        .with_leg(Leg::creation(Boson::SmallPhi, q(1), minus_k(level, 3)))
        .with_leg(Leg::creation(Boson::SmallPhi, q(-1), minus_k(level, 1)));
    prim(p)
}

/// `(u + kħ)^m h⁺(u + kħ)`, whose `u^{-n-1}` coefficient is the `δ(u-(v+kħ))`
/// term of `[e_m, f_n]`.
pub fn shifted_hp(level: &Level, m: i64) -> VopExpr {
    let c = level.k();
    let power = prim(Primitive::identity().with_power(PowerFactor::scalar(q(m), c.clone())));
    VopExpr::Product(vec![power, hp(level).shifted(c)])
}

/// `ξ(u) = :exp{-χ(u; -(k+2))}:`
pub fn xi(level: &Level) -> VopExpr {
    field(Boson::Chi, -1, minus_k(level, 2), minus_k(level, 2))
}

/// `η(u) = :exp{χ(u; -(k+2))}:`
pub fn eta(level: &Level) -> VopExpr {
    field(Boson::Chi, 1, minus_k(level, 2), minus_k(level, 2))
}

/// `(k+2)j + c` as a negated shift `-((k+2)j + c)`.
fn tower_shift(level: &Level, j: i64, c: &Rational) -> HShift {
    -(&level.k_plus(2).scale(&Rational::from_integer(j.into())) + &RatFunc::from_rational(c.clone()))
}

/// The screening current `S(u)_{[J]}`.
pub fn screening(level: &Level, j_max: u32) -> VopExpr {
    let chi = VopExpr::difference(Rational::from_integer(1.into()), field(Boson::Chi, -1, q(-1), q(-1)));
    let phi = field(Boson::SmallPhi, -1, q(-1), q(0));
    let a = two_over(level);
    let mut big = Primitive::identity()
        .with_leg(Leg::creation(Boson::BigPhi, -&a, q(-1)))
        .with_charge(Boson::BigPhi, -&a);
    let zero = Rational::from_integer(0.into());
    let two = Rational::from_integer(2.into());
    for j in 0..=j_max as i64 {
        let lo = tower_shift(level, j, &zero);
        let hi = tower_shift(level, j, &two);
        big = big
            .with_power(PowerFactor::charge(Boson::BigPhi, q(1), hi.clone()))
            .with_power(PowerFactor::charge(Boson::BigPhi, q(-1), lo.clone()))
            .with_leg(Leg::annihilation(Boson::BigPhi, q(1), lo))
            .with_leg(Leg::annihilation(Boson::BigPhi, q(-1), hi));
    }
    VopExpr::Product(vec![chi, phi, prim(big)])
}

/// Creation part `Φ^{(-)}(u; A; B)` with coefficient `2/(k+2)`.
fn phi_minus(p: Primitive, level: &Level, spectral: bool, a: HShift, b: HShift) -> Primitive {
    let c = two_over(level);
    let (la, lb) = if spectral {
        (
            Leg::creation(Boson::BigPhi, c.clone(), a),
            Leg::creation(Boson::BigPhi, -&c, b),
        )
    } else {
        (
            Leg::constant_creation(Boson::BigPhi, c.clone(), a),
            Leg::constant_creation(Boson::BigPhi, -&c, b),
        )
    };
    p.with_leg(la).with_leg(lb)
}

/// `exp{-Φ^{(+)}(u; A; B)}`: annihilation legs `-1` at `A`, `+1` at `B`,
/// and `((u+Aħ)/(u+Bħ))^{∂_Φ}`.
fn minus_phi_plus(p: Primitive, a: HShift, b: HShift) -> Primitive {
    p.with_power(PowerFactor::charge(Boson::BigPhi, q(1), a.clone()))
        .with_power(PowerFactor::charge(Boson::BigPhi, q(-1), b.clone()))
        .with_leg(Leg::annihilation(Boson::BigPhi, q(-1), a))
        .with_leg(Leg::annihilation(Boson::BigPhi, q(1), b))
}

fn half(n: i64) -> Rational {
    Rational::new(n.into(), 2.into())
}

/// `a·k + b` with `a ∈ {−1/2, −1, 0}` written out explicitly.
fn lin(level: &Level, a: Rational, b: Rational) -> HShift {
    level.affine(&a, &b)
}

/// Shared `Φ` boson part of both vertex operators: creation legs from
/// `Σ_j [Φ^{(-)}(u; A + 2j; B + 2j) + Φ^{(-)}(0; 2+δ+2j; 2j)]`, the charge
/// `e^{l/(k+2) a_Φ}`, and `exp{-Σ_{j≥1} Φ^{(+)}(u; C - (k+2)j; D - (k+2)j)}`.
#[allow(clippy::too_many_arguments)]
fn vertex_phi_part(
    level: &Level,
    l: u32,
    j_max: u32,
    delta: &Rational,
    a: &HShift,
    b: &HShift,
    c: &HShift,
    d: &HShift,
) -> Primitive {
    let mut p = Primitive::identity();
    for j in 0..=j_max as i64 {
        let two_j = q(2 * j);
        p = phi_minus(p, level, true, a + &two_j, b + &two_j);
        let shifted = &RatFunc::from_rational(delta + Rational::from_integer((2 + 2 * j).into()));
        p = phi_minus(p, level, false, shifted.clone(), two_j);
    }
    p = p.with_charge(Boson::BigPhi, &q(l as i64) / &level.k_plus(2));
    for j in 1..=j_max as i64 {
        let step = level.k_plus(2).scale(&Rational::from_integer(j.into()));
        p = minus_phi_plus(p, c - &step, d - &step);
    }
    p
}

/// Top component `Φ_{l,l}(u)_{[J,δ]}` of the type I vertex operator.
pub fn phi_top(level: &Level, l: u32, j_max: u32, delta: &Rational) -> VopExpr {
    let li = l as i64;
    let mh = half(-1);
    let a = lin(level, mh.clone(), half(1 - li));
    let b = lin(level, mh.clone(), half(1 + li));
    let c = lin(level, mh.clone(), half(li - 1));
    let d = lin(level, mh, half(-li - 1));
    prim(vertex_phi_part(level, l, j_max, delta, &a, &b, &c, &d))
}

/// Bottom component `Ψ_{l,0}(u)_{[J,δ]}` of the type II vertex operator.
pub fn psi_bottom(level: &Level, l: u32, j_max: u32, delta: &Rational) -> VopExpr {
    let li = l as i64;
    let m1 = Rational::from_integer((-1).into());
    let zero = Rational::from_integer(0.into());
    let a = lin(level, m1.clone(), half(li - 5));
    let b = lin(level, m1.clone(), half(-li - 1));
    let c = lin(level, zero.clone(), half(1 - li));
    let d = lin(level, zero, half(li - 3));
    let phi_part = prim(vertex_phi_part(level, l, j_max, delta, &a, &b, &c, &d));
    let sphi = prim(Primitive::exp_field(
        Boson::SmallPhi,
        q(1),
        lin(level, m1.clone(), half(li - 5)),
        lin(level, m1.clone(), half(-li - 3)),
    ));
    let chi_shift = lin(level, m1, half(li - 3));
    let chi = prim(Primitive::exp_field(Boson::Chi, q(1), chi_shift.clone(), chi_shift));
    VopExpr::Product(vec![phi_part, sphi, chi])
}
