//! Undeformed bosonized currents, evaluated directly with the Heisenberg
//! rules and Laurent monomials in `u`. Used as an independent reference for
//! the `ħ → 0` limit of the deformed currents.
//!
//! * `e_cl(u) = :∂χ(u) e^{-χ(u)-φ(u)}:`
//! * `f_cl(u) = :[(k+2)∂φ(u) + (k+1)∂χ(u) + 2∂Φ(u)] e^{χ(u)+φ(u)}:`
//! * `h_cl(u) = 2(∂φ(u) + ∂Φ(u))`
//!
//! with `∂X(u) = ∂_X u^{-1} + Σ_{n≠0} a_{X,n} u^{-n-1}`.

use num_traits::Zero;

use crate::engine::{EngineError, ModeOperator, StateOp};
use crate::fock::{charge_shift, Boson, Charges, FockState, FockVector, Occupation};
use crate::level::Level;
use crate::scalar::{binomial, factorial, int, RatFunc, Scalar};

use super::CurrentId;

struct Classical {
    /// `Σ c_X ∂X(u)`, empty for a pure exponential.
    insertion: Vec<(Boson, RatFunc)>,
    /// `:exp Σ β_X X(u):`
    betas: Vec<(Boson, i64)>,
}

impl Classical {
    fn of(id: &CurrentId, level: &Level) -> Self {
        match id {
            CurrentId::ClassicalE => Classical {
                insertion: vec![(Boson::Chi, RatFunc::one())],
                betas: vec![(Boson::SmallPhi, -1), (Boson::Chi, -1)],
            },
            CurrentId::ClassicalF => Classical {
                insertion: vec![
                    (Boson::BigPhi, RatFunc::from_int(2)),
                    (Boson::SmallPhi, level.k_plus(2)),
                    (Boson::Chi, level.k_plus(1)),
                ],
                betas: vec![(Boson::SmallPhi, 1), (Boson::Chi, 1)],
            },
            CurrentId::ClassicalH => Classical {
                insertion: vec![(Boson::BigPhi, RatFunc::from_int(2)), (Boson::SmallPhi, RatFunc::from_int(2))],
                betas: vec![],
            },
            other => unreachable!("{other} is not a classical current"),
        }
    }

    fn beta(&self, b: Boson) -> i64 {
        self.betas.iter().find(|x| x.0 == b).map_or(0, |x| x.1)
    }

    fn power(&self, charges: &Charges) -> i64 {
        let p: crate::scalar::Rational = self.betas.iter().map(|(b, beta)| charges.eigenvalue(*b) * int(*beta)).sum();
        p.to_integer().try_into().unwrap_or(i64::MAX)
    }

    fn insertion_degree(&self) -> i64 {
        if self.insertion.is_empty() {
            0
        } else {
            -1
        }
    }
}

/// Annihilation exponential `exp(-Σ β a_n u^{-n}/n)` on one occupation:
/// removed sub-multisets with weights `Π C(m_n, r_n) (-κβ)^{r_n}`.
fn annihilate(occ: &Occupation, factor: &RatFunc) -> Vec<(Occupation, RatFunc)> {
    let mut out = vec![(Occupation::default(), RatFunc::one())];
    for (i, &m) in occ.mults().iter().enumerate() {
        let mut next = Vec::new();
        for (removed, c) in &out {
            for r in 0..=m {
                let mut mults = removed.mults().to_vec();
                mults.resize(i + 1, 0);
                mults[i] = r;
                let w = &(c * &factor.pow(r as u32)) * &RatFunc::from_rational(binomial(m as u32, r as u32));
                if !w.is_zero() {
                    next.push((Occupation::from_mults(mults), w));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(r, c)| (occ.minus(&r), c)).collect()
}

/// Creation exponential `exp(Σ β a_{-n} u^n / n)` restricted to weight `w`.
fn create(beta: i64, w: usize) -> Vec<(Occupation, RatFunc)> {
    if beta == 0 {
        return if w == 0 {
            vec![(Occupation::default(), RatFunc::one())]
        } else {
            vec![]
        };
    }
    Occupation::all_of_weight(w)
        .into_iter()
        .map(|o| {
            let mut c = RatFunc::one();
            for (i, &m) in o.mults().iter().enumerate() {
                let g = crate::scalar::rational(beta, i as i64 + 1);
                c = &c * &RatFunc::from_rational(crate::scalar::pow_q(&g, m as u32) / factorial(m as u32));
            }
            (o, c)
        })
        .collect()
}

struct ClassicalMode {
    id: CurrentId,
    mode: i64,
}

impl StateOp for ClassicalMode {
    fn apply_state(&self, state: &FockState, cap: usize, level: &Level) -> Result<FockVector, EngineError> {
        let cl = Classical::of(&self.id, level);
        let m = self.mode;
        let w_in = state.weight() as i64;
        let target = w_in - cl.power(&state.charges) - cl.insertion_degree() - m - 1;
        let mut out = FockVector::zero();
        if target < 0 || target > cap as i64 {
            return Ok(out);
        }
        let target = target as usize;

        let mut charges = state.charges;
        for (b, beta) in &cl.betas {
            let (dl, ds, dt) = charge_shift(*b, &RatFunc::from_int(*beta), level)?;
            charges = charges.shifted(dl, ds, dt);
        }

        // annihilation exponentials, boson by boson
        let mut mids: Vec<([Occupation; 3], RatFunc)> = vec![(state.occ.clone(), RatFunc::one())];
        for b in Boson::ALL {
            let beta = cl.beta(b);
            if beta == 0 {
                continue;
            }
            let factor = b.metric(level).scale(&int(-beta));
            let mut next = Vec::new();
            for (occs, c) in &mids {
                for (rem, w) in annihilate(&occs[b.index()], &factor) {
                    let mut o = occs.clone();
                    o[b.index()] = rem;
                    next.push((o, c * &w));
                }
            }
            mids = next;
        }

        // insertion: zero mode, one annihilation, or one creation (applied last)
        enum Ins {
            None,
            Create(Boson),
        }
        let mut after: Vec<([Occupation; 3], RatFunc, Ins)> = Vec::new();
        for (occs, c) in mids {
            if cl.insertion.is_empty() {
                after.push((occs, c, Ins::None));
                continue;
            }
            for (b, cb) in &cl.insertion {
                let ev = state.charges.eigenvalue(*b);
                if !ev.is_zero() {
                    after.push((occs.clone(), &c * &cb.scale(&ev), Ins::None));
                }
                for (i, &mult) in occs[b.index()].mults().iter().enumerate() {
                    if mult == 0 {
                        continue;
                    }
                    let n = i + 1;
                    let mut o = occs.clone();
                    let mut mults = o[b.index()].mults().to_vec();
                    mults[i] -= 1;
                    o[b.index()] = Occupation::from_mults(mults);
                    let k = b.metric(level).scale(&int((n * mult as usize) as i64));
                    after.push((o, &c * &(cb * &k), Ins::None));
                }
                after.push((occs.clone(), &c * cb, Ins::Create(*b)));
            }
        }

        for (occs, c, ins) in after {
            let w_mid: usize = occs.iter().map(Occupation::weight).sum();
            let extra_needed = match ins {
                Ins::None => 0,
                Ins::Create(..) => 1,
            };
            if w_mid + extra_needed > target {
                continue;
            }
            let budget = target - w_mid;
            match &ins {
                Ins::None => self.spread(&cl, &occs, &c, budget, charges, None, &mut out),
                Ins::Create(b) => {
                    // a_{X,-n} u^{n-1} with n ≥ 1 carries weight n
                    for n in 1..=budget {
                        self.spread(&cl, &occs, &c, budget - n, charges, Some((*b, n)), &mut out);
                    }
                }
            }
        }
        Ok(out)
    }

    fn max_weight_drop(&self, charges: &Charges) -> Result<i64, EngineError> {
        // ħ-free: independent of the level
        let cl = Classical::of(&self.id, &Level::Symbolic);
        Ok(cl.power(charges) + cl.insertion_degree() + self.mode + 1)
    }

    fn charge_images(&self, charges: &Charges, level: &Level) -> Result<Vec<Charges>, EngineError> {
        let cl = Classical::of(&self.id, level);
        let mut c = *charges;
        for (b, beta) in &cl.betas {
            let (dl, ds, dt) = charge_shift(*b, &RatFunc::from_int(*beta), level)?;
            c = c.shifted(dl, ds, dt);
        }
        Ok(vec![c])
    }
}

impl ClassicalMode {
    /// Distributes `budget` weight over the creation exponentials and adds
    /// the resulting states.
    #[allow(clippy::too_many_arguments)]
    fn spread(
        &self,
        cl: &Classical,
        occs: &[Occupation; 3],
        c: &RatFunc,
        budget: usize,
        charges: Charges,
        created: Option<(Boson, usize)>,
        out: &mut FockVector,
    ) {
        let [b0, b1, b2] = Boson::ALL;
        for w0 in 0..=budget {
            for (o0, c0) in create(cl.beta(b0), w0) {
                for w1 in 0..=(budget - w0) {
                    let w2 = budget - w0 - w1;
                    for (o1, c1) in create(cl.beta(b1), w1) {
                        for (o2, c2) in create(cl.beta(b2), w2) {
                            let mut st = FockState {
                                charges,
                                occ: [occs[0].union(&o0), occs[1].union(&o1), occs[2].union(&o2)],
                            };
                            if let Some((b, n)) = created {
                                st = st.create(b, n);
                            }
                            let coeff = &(&(c * &c0) * &c1) * &c2;
                            out.add_term(st, Scalar::from_ratfunc(coeff));
                        }
                    }
                }
            }
        }
    }
}

pub(crate) fn mode_operator(id: &CurrentId, m: i64, label: String) -> ModeOperator {
    ModeOperator::new(label, ClassicalMode { id: id.clone(), mode: m })
}
