//! The defining relations in mode form, shared by the Fock and evaluation
//! backends.

use std::collections::BTreeMap;

use crate::engine::{
    bilinear, ef_delta, outcome, run_checks, Backend, Check, Combination, EngineError, RelationReport, Severity,
};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Gen {
    E,
    F,
    Hp,
    Hm,
}

impl Gen {
    pub(crate) const ALL: [Gen; 4] = [Gen::E, Gen::F, Gen::Hp, Gen::Hm];

    pub(crate) fn name(self) -> &'static str {
        match self {
            Gen::E => "e",
            Gen::F => "f",
            Gen::Hp => "hp",
            Gen::Hm => "hm",
        }
    }
}

/// `x + aħ` as coefficients in `x`.
fn linear(a: &Scalar) -> Vec<Scalar> {
    vec![a * &Scalar::hbar(), Scalar::one()]
}

fn mul(p: &[Scalar], q: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = &out[i + j] + &(a * b);
        }
    }
    out
}

pub(crate) struct Family {
    pub name: &'static str,
    pub a: Gen,
    pub b: Gen,
    pub p_left: Vec<Scalar>,
    pub p_right: Vec<Scalar>,
}

/// The two-current exchange relations at central value `c`, cleared of
/// denominators: `P_L(u−v) A(u)B(v) = P_R(u−v) B(v)A(u)`.
pub(crate) fn exchange_families(c: &Scalar) -> Vec<Family> {
    let one = Scalar::one();
    let minus_one = Scalar::from_int(-1);
    let one_minus_c = &one - c;
    let minus_one_minus_c = &minus_one - c;
    let fam = |name, a, b, p_left, p_right| Family {
        name,
        a,
        b,
        p_left,
        p_right,
    };
    vec![
        fam("ee", Gen::E, Gen::E, linear(&minus_one), linear(&one)),
        fam("ff", Gen::F, Gen::F, linear(&one), linear(&minus_one)),
        fam("hp_e", Gen::Hp, Gen::E, linear(&minus_one), linear(&one)),
        fam("hm_e", Gen::Hm, Gen::E, linear(&minus_one), linear(&one)),
        fam("hp_f", Gen::Hp, Gen::F, linear(&one_minus_c), linear(&minus_one_minus_c)),
        fam("hm_f", Gen::Hm, Gen::F, linear(&one), linear(&minus_one)),
        fam("hp_hp", Gen::Hp, Gen::Hp, vec![one.clone()], vec![one.clone()]),
        fam("hm_hm", Gen::Hm, Gen::Hm, vec![one.clone()], vec![one.clone()]),
        fam(
            "hp_hm",
            Gen::Hp,
            Gen::Hm,
            mul(&linear(&minus_one), &linear(&one_minus_c)),
            mul(&linear(&one), &linear(&minus_one_minus_c)),
        ),
    ]
}

pub(crate) type OpFn<'a, Op> = dyn Fn(Gen, i64) -> Result<Op, EngineError> + Send + Sync + 'a;
pub(crate) type PairFn<'a, Op> = dyn Fn(i64, i64) -> Result<Op, EngineError> + Send + Sync + 'a;

/// Operator sources for the full relation suite on one backend.
pub(crate) struct Generators<'a, Op> {
    pub op: &'a OpFn<'a, Op>,
    pub d: Op,
    /// `T⁺_{m,n}`: the `v^{-n-1}` coefficient of `(v+cħ)^m h⁺(v+cħ)`.
    pub t_plus: &'a PairFn<'a, Op>,
    /// `T⁻_{m,n}`: the `v^{-(m+n)-1}` coefficient of `h⁻(v)`.
    pub t_minus: &'a PairFn<'a, Op>,
}

pub(crate) fn report(
    name: impl Into<String>,
    severity: Severity,
    params: &BTreeMap<String, String>,
    checks: Vec<Check<'_>>,
) -> RelationReport {
    RelationReport::new(name, severity, params.clone(), run_checks(checks))
}

/// `[d, X_m] = −m X_{m−1}` for every generator.
pub(crate) fn d_reports<'a, B: Backend>(
    backend: &'a B,
    gens: &'a Generators<'a, B::Op>,
    modes: &[i64],
    probes: &'a [(String, B::Vector)],
    params: &BTreeMap<String, String>,
) -> Vec<RelationReport> {
    Gen::ALL
        .iter()
        .map(|&g| {
            let mut checks = Vec::new();
            for &m in modes {
                for (label, probe) in probes {
                    checks.push(Check::new(vec![m], label.clone(), move || {
                        let x = (gens.op)(g, m)?;
                        let mut comb = Combination::default();
                        comb.push_bracket(&Scalar::one(), &gens.d, &x, 1);
                        comb.push(Scalar::from_int(m), vec![(gens.op)(g, m - 1)?]);
                        outcome(backend, &comb, probe)
                    }));
                }
            }
            report(format!("d_{}", g.name()), Severity::Asserted, params, checks)
        })
        .collect()
}

/// The exchange relations and the `e–f` relation on all mode pairs, at
/// central value `c` (rendered as `c_label` in the report parameters).
pub(crate) fn exchange_reports<'a, B: Backend>(
    backend: &'a B,
    gens: &'a Generators<'a, B::Op>,
    c: &Scalar,
    c_label: &str,
    pairs: &[(i64, i64)],
    probes: &'a [(String, B::Vector)],
    params: &BTreeMap<String, String>,
) -> Vec<RelationReport> {
    let mut params = params.clone();
    params.insert("c".into(), c_label.to_string());
    let mut out = Vec::new();
    for fam in exchange_families(c) {
        let fam = std::sync::Arc::new(fam);
        let mut checks = Vec::new();
        for &(m, n) in pairs {
            for (label, probe) in probes {
                let fam = fam.clone();
                checks.push(Check::new(vec![m, n], label.clone(), move || {
                    let a = |i| (gens.op)(fam.a, i);
                    let b = |i| (gens.op)(fam.b, i);
                    let comb = bilinear(&a, &b, &fam.p_left, &fam.p_right, m, n, 1)?;
                    outcome(backend, &comb, probe)
                }));
            }
        }
        out.push(report(fam.name, Severity::Asserted, &params, checks));
    }
    let mut checks = Vec::new();
    for &(m, n) in pairs {
        for (label, probe) in probes {
            checks.push(Check::new(vec![m, n], label.clone(), move || {
                let comb = ef_delta(
                    (gens.op)(Gen::E, m)?,
                    (gens.op)(Gen::F, n)?,
                    (gens.t_plus)(m, n)?,
                    (gens.t_minus)(m, n)?,
                );
                outcome(backend, &comb, probe)
            }));
        }
    }
    out.push(report("ef", Severity::Asserted, &params, checks));
    out
}

/// Coefficient of `x^j` in a family polynomial, for tests.
#[cfg(test)]
pub(crate) fn coeff_at(p: &[Scalar], j: usize, k0: i64) -> crate::scalar::RatFunc {
    p.get(j).map_or(crate::scalar::RatFunc::zero(), |c| {
        crate::scalar::RatFunc::from_rational(c.eval(&crate::scalar::int(k0), &crate::scalar::int(1)).unwrap())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;

    #[test]
    fn hp_hm_polynomials() {
        // oracle at k=2, ħ=1: (x-1)(x-1) and (x+1)(x-3)
        let fams = exchange_families(&Scalar::k());
        let f = fams.iter().find(|f| f.name == "hp_hm").unwrap();
        let left: Vec<_> = (0..3).map(|j| coeff_at(&f.p_left, j, 2)).collect();
        let right: Vec<_> = (0..3).map(|j| coeff_at(&f.p_right, j, 2)).collect();
        assert_eq!(left, vec![RatFunc::from_int(1), RatFunc::from_int(-2), RatFunc::from_int(1)]);
        assert_eq!(
            right,
            vec![RatFunc::from_int(-3), RatFunc::from_int(-2), RatFunc::from_int(1)]
        );
    }

    #[test]
    fn nine_exchange_families() {
        assert_eq!(exchange_families(&Scalar::zero()).len(), 9);
    }
}
