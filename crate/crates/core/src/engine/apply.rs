//! Mode extraction for a single primitive acting on a basis state.
//!
//! With `t = ħ/u`, every factor of a primitive is `u^{deg}` times a power
//! series in `t`, so the coefficient of `u^{-m-1}` between fixed basis states
//! is one coefficient `[t^E]` of a finite product of series.

use crate::fock::{charge_shift, Boson, FockState, FockVector, Occupation};
use crate::level::Level;
use crate::scalar::{binomial, int, RatFunc, Scalar};
use crate::series::Series;
use crate::vop::{Leg, NormalForm, Primitive, Side};

use super::EngineError;

/// Sub-multisets `r ⊆ occ` with the weight `Π_n C(m_n, r_n) (κ n β_n)^{r_n}`.
fn annihilate(occ: &Occupation, betas: &[Series], kappa: &RatFunc, order: usize) -> Vec<(Occupation, Series)> {
    let mults = occ.mults();
    let mut out = Vec::new();
    let mut removed = vec![0u16; mults.len()];
    fn rec(
        i: usize,
        mults: &[u16],
        betas: &[Series],
        kappa: &RatFunc,
        acc: Series,
        removed: &mut Vec<u16>,
        occ: &Occupation,
        out: &mut Vec<(Occupation, Series)>,
    ) {
        if i == mults.len() {
            let rem = occ.minus(&Occupation::from_mults(removed.clone()));
            out.push((rem, acc));
            return;
        }
        let n = i + 1;
        let step = betas[i].scale(&kappa.scale(&int(n as i64)));
        let mut pow = Series::one(acc.order());
        for r in 0..=mults[i] {
            if r > 0 {
                pow = pow.mul(&step);
                if pow.is_zero() {
                    break;
                }
            }
            removed[i] = r;
            let c = RatFunc::from_rational(binomial(mults[i] as u32, r as u32));
            rec(i + 1, mults, betas, kappa, acc.mul(&pow).scale(&c), removed, occ, out);
        }
        removed[i] = 0;
    }
    rec(0, mults, betas, kappa, Series::one(order), &mut removed, occ, &mut out);
    out
}

/// `β_n = Σ_L (α_L / n) (1 + A_L t)^{-n}` for `n = 1..=max_n`.
fn annihilation_coeffs(legs: &[&Leg], max_n: usize, order: usize) -> Vec<Series> {
    (1..=max_n)
        .map(|n| {
            let mut s = Series::zero(order);
            for leg in legs {
                let a = leg.alpha.scale(&crate::scalar::rational(1, n as i64));
                s = s.add(&Series::binomial(&leg.shift, &RatFunc::from_int(-(n as i64)), order).scale(&a));
            }
            s
        })
        .collect()
}

/// `γ_n = Σ_L (α_L / n) (ρ_L + A_L t)^n` for `n = 1..=max_n`.
fn creation_coeffs(legs: &[&Leg], max_n: usize, order: usize) -> Vec<Series> {
    (1..=max_n)
        .map(|n| {
            let mut s = Series::zero(order);
            for leg in legs {
                let a = leg.alpha.scale(&crate::scalar::rational(1, n as i64));
                s = s.add(&Series::linear_power(leg.spectral, &leg.shift, n as u32, order).scale(&a));
            }
            s
        })
        .collect()
}

/// Per boson and weight, the occupations created by the creation legs with
/// their series `Π_n γ_n^{o_n} / o_n!`. Bosons without legs only create the
/// empty occupation.
fn creation_table(legs: &[&Leg], max_w: usize, order: usize) -> Vec<Vec<(Occupation, Series)>> {
    let mut table = vec![Vec::new(); max_w + 1];
    table[0].push((Occupation::default(), Series::one(order)));
    if legs.is_empty() {
        return table;
    }
    let gammas = creation_coeffs(legs, max_w, order);
    for (w, slot) in table.iter_mut().enumerate().skip(1) {
        for occ in Occupation::all_of_weight(w) {
            let mut s = Series::one(order);
            for (i, &o) in occ.mults().iter().enumerate() {
                if o == 0 {
                    continue;
                }
                let inv = RatFunc::from_rational(crate::scalar::factorial(o as u32).recip());
                s = s.mul(&gammas[i].pow(o as u32)).scale(&inv);
            }
            if !s.is_zero() {
                slot.push((occ, s));
            }
        }
    }
    table
}

/// Coefficient of `u^{-m-1}` of a primitive (without its `ħ^{-n}` prefactor)
/// on a basis state, truncated to output weight `≤ cap`.
pub fn apply_primitive(p: &Primitive, m: i64, state: &FockState, cap: usize, level: &Level) -> Result<FockVector, EngineError> {
    let hom = p.homogeneity(&state.charges)?;
    let w_in = state.weight();
    let e_of = |w_out: usize| hom.exponent_before_division(w_in, w_out, m);
    let mut out = FockVector::zero();
    let e_max = e_of(cap);
    if e_max < 0 {
        return Ok(out);
    }
    let order = e_max as usize;

    // annihilation legs, boson by boson
    let mut mids: Vec<([Occupation; 3], Series)> = vec![(state.occ.clone(), Series::one(order))];
    for b in Boson::ALL {
        let legs: Vec<&Leg> = p
            .legs
            .iter()
            .filter(|l| l.boson == b && l.side == Side::Annihilation)
            .collect();
        if legs.is_empty() {
            continue;
        }
        let occ = state.occupation(b);
        let betas = annihilation_coeffs(&legs, occ.mults().len(), order);
        let options = annihilate(occ, &betas, &b.metric(level), order);
        let mut next = Vec::with_capacity(mids.len() * options.len());
        for (occs, s) in &mids {
            for (rem, t) in &options {
                let prod = s.mul(t);
                if prod.is_zero() {
                    continue;
                }
                let mut o = occs.clone();
                o[b.index()] = rem.clone();
                next.push((o, prod));
            }
        }
        mids = next;
    }

    // power factors on the input charges
    let mut pow = Series::one(order);
    for pf in &p.powers {
        if pf.shift.is_zero() {
            continue;
        }
        pow = pow.mul(&Series::binomial(&pf.shift, &pf.exponent(&state.charges), order));
    }

    // zero modes
    let mut charges = state.charges;
    for (b, beta) in &p.charges {
        let (dl, ds, dt) = charge_shift(*b, beta, level)?;
        charges = charges.shifted(dl, ds, dt);
    }

    let min_mid = mids
        .iter()
        .map(|(o, _)| o.iter().map(Occupation::weight).sum::<usize>())
        .min();
    let Some(min_mid) = min_mid else {
        return Ok(out);
    };
    let max_create = cap.saturating_sub(min_mid);
    let tables: Vec<Vec<Vec<(Occupation, Series)>>> = Boson::ALL
        .iter()
        .map(|b| {
            let legs: Vec<&Leg> = p.legs.iter().filter(|l| l.boson == *b && l.side == Side::Creation).collect();
            creation_table(&legs, max_create, order)
        })
        .collect();

    for (occs, s) in mids {
        let s = s.mul(&pow);
        let w_mid: usize = occs.iter().map(Occupation::weight).sum();
        if w_mid > cap {
            continue;
        }
        let budget = cap - w_mid;
        for w0 in 0..=budget {
            for (o0, s0) in &tables[0][w0] {
                for w1 in 0..=(budget - w0) {
                    for (o1, s1) in &tables[1][w1] {
                        let s01 = s0.mul(s1);
                        for w2 in 0..=(budget - w0 - w1) {
                            let e = e_of(w_mid + w0 + w1 + w2);
                            if e < 0 {
                                continue;
                            }
                            for (o2, s2) in &tables[2][w2] {
                                let c = s.product_coeff(&s01.mul(s2), e as usize);
                                if c.is_zero() {
                                    continue;
                                }
                                let target = FockState {
                                    charges,
                                    occ: [occs[0].union(o0), occs[1].union(o1), occs[2].union(o2)],
                                };
                                out.add_term(target, Scalar::monomial(c, e as u32));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Mode `m` of a weighted sum of primitives on a basis state, with the
/// deferred `1/ħ` divisions carried out exactly.
pub fn apply_normal_form(
    nf: &NormalForm,
    m: i64,
    state: &FockState,
    cap: usize,
    level: &Level,
) -> Result<FockVector, EngineError> {
    let top = nf.terms.iter().map(|(_, p)| p.hbar_inverse).max().unwrap_or(0);
    let mut acc = FockVector::zero();
    for (w, p) in &nf.terms {
        let v = apply_primitive(p, m, state, cap, level)?;
        let lift = w.shift_hbar(top - p.hbar_inverse);
        acc.add_scaled(&v, &lift);
    }
    for _ in 0..top {
        acc = acc.try_map_coeffs(|c| c.divide_by_hbar())?;
    }
    Ok(acc)
}
