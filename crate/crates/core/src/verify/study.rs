//! Exploratory residual tables for statements that only hold as `J → ∞`
//! (and `δ → 0` for the vertex operators). Nothing here passes or fails.

use serde::{Deserialize, Serialize};

use crate::algebra::{CurrentId, Library, TowerType};
use crate::engine::{bilinear, evaluate, Combination, EngineError, FockBackend, ModeOperator, Window};
use crate::fock::{Charges, FockVector};
use crate::level::Level;
use crate::scalar::{int, rational, render_rational, Rational, Scalar};

use super::suites::{grading_sign, probes_for, SHIFT_E, SHIFT_ETA, SHIFT_F, SHIFT_H, SHIFT_S};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub relation: String,
    #[serde(rename = "J")]
    pub j: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub modes: Vec<i64>,
    pub probe: String,
    /// `Σ|c|` over the residual coefficients at the specialization.
    pub residual: String,
    /// `Σ|c|` of the first word of the relation, the normalization.
    pub scale: String,
    /// `residual / scale`, or `residual` itself when the scale vanishes.
    pub ratio: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_f64: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub relation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub modes: Vec<i64>,
    pub probe: String,
    /// Ratios in order of increasing `J`.
    pub ratios: Vec<String>,
    pub exactly_zero: bool,
    pub nonincreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyTable {
    pub study: String,
    pub k: String,
    pub hbar: String,
    pub rows: Vec<StudyRow>,
    pub trends: Vec<Trend>,
}

impl StudyTable {
    pub fn to_csv(&self) -> String {
        let float = self.rows.iter().any(|r| r.ratio_f64.is_some());
        let mut out = String::from("relation,J,delta,modes,probe,residual,scale,ratio");
        if float {
            out.push_str(",ratio_f64");
        }
        out.push('\n');
        for r in &self.rows {
            let modes: Vec<String> = r.modes.iter().map(i64::to_string).collect();
            let ratio = r.error.as_ref().map_or(r.ratio.clone(), |e| format!("error: {e}"));
            out.push_str(&format!(
                "{},{},{},{},\"{}\",{},{},{}",
                r.relation,
                r.j,
                r.delta.as_deref().unwrap_or("-"),
                modes.join(" "),
                r.probe,
                r.residual,
                r.scale,
                ratio
            ));
            if float {
                out.push_str(&format!(",{}", r.ratio_f64.map_or(String::from("-"), |x| format!("{x:e}"))));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct StudyParams {
    pub j_range: Vec<u32>,
    pub k0: Rational,
    pub h0: Rational,
    pub charges: Vec<Charges>,
    pub max_probe_weight: usize,
    pub out_weight_cap: usize,
    pub modes: (i64, i64),
    pub deltas: Vec<Rational>,
    pub float: bool,
}

impl StudyParams {
    pub fn screening_default() -> Self {
        StudyParams {
            j_range: (0..=6).collect(),
            k0: int(3),
            h0: rational(1, 10),
            charges: vec![Charges::int(1, 0, 0)],
            max_probe_weight: 0,
            out_weight_cap: 1,
            modes: (-1, 1),
            deltas: vec![rational(1, 10)],
            float: false,
        }
    }

    pub fn vertex_default() -> Self {
        StudyParams {
            j_range: (1..=6).collect(),
            deltas: vec![rational(1, 10), rational(1, 100)],
            charges: vec![Charges::int(0, 0, 0)],
            modes: (-1, 0),
            ..Self::screening_default()
        }
    }
}

fn l1(v: &FockVector, k0: &Rational, h0: &Rational) -> Result<Rational, EngineError> {
    let mut acc = int(0);
    for (_, c) in v.iter() {
        let x = c.eval(k0, h0)?;
        acc += if x < int(0) { -x } else { x };
    }
    Ok(acc)
}

struct Job<'a> {
    relation: String,
    j: u32,
    delta: Option<Rational>,
    modes: Vec<i64>,
    build: Box<dyn Fn() -> Result<Combination<ModeOperator>, EngineError> + Send + Sync + 'a>,
}

fn rows(lib: &Library, p: &StudyParams, planned: Vec<Job<'_>>) -> Vec<StudyRow> {
    use rayon::prelude::*;
    let backend = FockBackend::new(lib.engine(), Window::new(p.out_weight_cap));
    let probes = probes_for(&p.charges, p.max_probe_weight);
    let jobs: Vec<(&Job<'_>, &(String, FockVector))> =
        planned.iter().flat_map(|s| probes.iter().map(move |pr| (s, pr))).collect();
    jobs.into_par_iter()
        .map(|(job, (label, probe))| {
            let mut row = StudyRow {
                relation: job.relation.clone(),
                j: job.j,
                delta: job.delta.as_ref().map(render_rational),
                modes: job.modes.clone(),
                probe: label.clone(),
                residual: String::new(),
                scale: String::new(),
                ratio: String::new(),
                ratio_f64: None,
                error: None,
            };
            let result = (|| -> Result<(Rational, Rational), EngineError> {
                let comb = (job.build)()?;
                let v = evaluate(&backend, &comb, probe)?;
                let residual = l1(&v.truncated(p.out_weight_cap), &p.k0, &p.h0)?;
                let scale = match comb.terms.first() {
                    Some((c, w)) => {
                        let lead = lib.engine().compose(w, probe, &backend.window)?.scaled(c);
                        l1(&lead, &p.k0, &p.h0)?
                    }
                    None => int(0),
                };
                Ok((residual, scale))
            })();
            match result {
                Ok((residual, scale)) => {
                    let ratio = if scale == int(0) {
                        residual.clone()
                    } else {
                        &residual / &scale
                    };
                    row.residual = render_rational(&residual);
                    row.scale = render_rational(&scale);
                    row.ratio = render_rational(&ratio);
                    if p.float {
                        use num_traits::ToPrimitive;
                        row.ratio_f64 = ratio.to_f64();
                    }
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect()
}

fn trends(rows: &[StudyRow]) -> Vec<Trend> {
    let mut out: Vec<Trend> = Vec::new();
    for r in rows {
        let key = |t: &Trend| t.relation == r.relation && t.delta == r.delta && t.modes == r.modes && t.probe == r.probe;
        let pos = match out.iter().position(key) {
            Some(i) => i,
            None => {
                out.push(Trend {
                    relation: r.relation.clone(),
                    delta: r.delta.clone(),
                    modes: r.modes.clone(),
                    probe: r.probe.clone(),
                    ratios: Vec::new(),
                    exactly_zero: true,
                    nonincreasing: true,
                });
                out.len() - 1
            }
        };
        let t = &mut out[pos];
        let value = if r.error.is_some() {
            String::from("error")
        } else {
            r.ratio.clone()
        };
        t.exactly_zero &= value == "0";
        if let (Some(prev), Some(cur)) = (
            t.ratios.last().and_then(|x| crate::scalar::parse_rational(x)),
            crate::scalar::parse_rational(&value),
        ) {
            t.nonincreasing &= cur <= prev;
        }
        if r.error.is_some() {
            t.nonincreasing = false;
        }
        t.ratios.push(value);
    }
    out
}

/// `[X, b]` for a combination `X` of words.
fn bracket_right(x: &Combination<ModeOperator>, b: &ModeOperator) -> Combination<ModeOperator> {
    let mut comb = Combination::default();
    for (c, w) in &x.terms {
        let mut right = w.clone();
        right.push(b.clone());
        let mut left = vec![b.clone()];
        left.extend(w.iter().cloned());
        comb.push(c.clone(), right);
        comb.push(-c, left);
    }
    comb
}

fn bracket(
    lib: &Library,
    a: &CurrentId,
    ma: i64,
    b: &CurrentId,
    mb: i64,
    sign: i64,
) -> Result<Combination<ModeOperator>, EngineError> {
    let mut comb = Combination::default();
    comb.push_bracket(&Scalar::one(), &lib.op(a, ma)?, &lib.op(b, mb)?, sign);
    Ok(comb)
}

/// Residuals of the screening-charge commutators for each `J`: the `f` and
/// `h⁻` columns only vanish in the limit, the `e` and `η₀` columns exactly.
pub fn screening_convergence_study(p: &StudyParams) -> Result<StudyTable, EngineError> {
    let level = Level::value(p.k0.clone())?;
    let lib = Library::new(level);
    let mut planned = Vec::new();
    let lib_ref = &lib;
    for &j in &p.j_range {
        let s = CurrentId::Screening { j };
        for m in p.modes.0..=p.modes.1 {
            for (name, id, shift) in [
                ("S_f", CurrentId::F, SHIFT_F),
                ("S_hm", CurrentId::Hm, SHIFT_H),
                ("S_e", CurrentId::E, SHIFT_E),
            ] {
                let s = s.clone();
                let sign = grading_sign(SHIFT_S, shift);
                planned.push(Job {
                    relation: name.into(),
                    j,
                    delta: None,
                    modes: vec![m],
                    build: Box::new(move || bracket(lib_ref, &s, 0, &id, m, sign)),
                });
            }
        }
        let sign = grading_sign(SHIFT_ETA, SHIFT_S);
        planned.push(Job {
            relation: "eta0_S".into(),
            j,
            delta: None,
            modes: vec![],
            build: Box::new(move || {
                let mut comb = Combination::default();
                comb.push_bracket(&Scalar::one(), &lib_ref.eta0()?, &lib_ref.screening_charge(j)?, sign);
                Ok(comb)
            }),
        });
    }
    let rows = rows(&lib, p, planned);
    Ok(StudyTable {
        study: "screening".into(),
        k: render_rational(&p.k0),
        hbar: render_rational(&p.h0),
        trends: trends(&rows),
        rows,
    })
}

/// `x + (a·k + b)ħ` at the specialized level.
fn lin(level: &Level, a: Rational, b: Rational) -> Vec<Scalar> {
    vec![Scalar::monomial(level.affine(&a, &b), 1), Scalar::one()]
}

/// Residuals of the `h±` exchange relations with `Φ_{l,l}` and `Ψ_{l,0}`
/// and of `[Ψ_{l,0}, f] = 0`, plus the two ends of the commutator towers,
/// for `l ∈ ls`.
pub fn vertex_study(p: &StudyParams, ls: &[u32]) -> Result<StudyTable, EngineError> {
    let level = Level::value(p.k0.clone())?;
    let lib = Library::new(level.clone());
    let lib_ref = &lib;
    let half = |n: i64| rational(n, 2);
    let mut planned = Vec::new();
    for &l in ls {
        let li = l as i64;
        for &j in &p.j_range {
            for delta in &p.deltas {
                let phi = CurrentId::PhiTop {
                    l,
                    j,
                    delta: delta.clone(),
                };
                let psi = CurrentId::PsiBottom {
                    l,
                    j,
                    delta: delta.clone(),
                };
                // x = v − u with h± in v and the vertex operator in u
                let rels = [
                    (
                        "hp_Phi",
                        CurrentId::Hp,
                        phi.clone(),
                        lin(&level, half(-1), half(-(li + 1))),
                        lin(&level, half(-1), half(li - 1)),
                    ),
                    (
                        "hm_Phi",
                        CurrentId::Hm,
                        phi.clone(),
                        lin(&level, half(1), half(-li - 1)),
                        lin(&level, half(1), half(li - 1)),
                    ),
                    (
                        "hp_Psi",
                        CurrentId::Hp,
                        psi.clone(),
                        lin(&level, int(0), half(li + 1)),
                        lin(&level, int(0), half(1 - li)),
                    ),
                    (
                        "hm_Psi",
                        CurrentId::Hm,
                        psi.clone(),
                        lin(&level, int(0), half(li + 1)),
                        lin(&level, int(0), half(1 - li)),
                    ),
                ];
                for m in p.modes.0..=p.modes.1 {
                    for n in p.modes.0..=p.modes.1 {
                        for (name, h, v, pl, pr) in rels.iter().cloned() {
                            planned.push(Job {
                                relation: format!("{name}[l={l}]"),
                                j,
                                delta: Some(delta.clone()),
                                modes: vec![m, n],
                                build: Box::new(move || {
                                    let a = |i| lib_ref.op(&h, i);
                                    let b = |i| lib_ref.op(&v, i);
                                    bilinear(&a, &b, &pl, &pr, m, n, 1)
                                }),
                            });
                        }
                        let psi = psi.clone();
                        planned.push(Job {
                            relation: format!("Psi_f[l={l}]"),
                            j,
                            delta: Some(delta.clone()),
                            modes: vec![m, n],
                            build: Box::new(move || bracket(lib_ref, &psi, m, &CurrentId::F, n, 1)),
                        });
                    }
                    // the towers end: [Ψ_{l,l}, e_0] = 0 and [Φ_{l,0}, f_0] = 0
                    for (name, ty, top, step) in [
                        ("Psi_tower_e", TowerType::II, l, CurrentId::E),
                        ("Phi_tower_f", TowerType::I, 0, CurrentId::F),
                    ] {
                        let delta = delta.clone();
                        planned.push(Job {
                            relation: format!("{name}[l={l}]"),
                            j,
                            delta: Some(delta.clone()),
                            modes: vec![m],
                            build: Box::new(move || {
                                let tower = lib_ref.vertex_tower(ty, l, top, j, &delta, m)?;
                                Ok(bracket_right(&tower, &lib_ref.op(&step, 0)?))
                            }),
                        });
                    }
                }
            }
        }
    }
    let rows = rows(&lib, p, planned);
    Ok(StudyTable {
        study: "vertex".into(),
        k: render_rational(&p.k0),
        hbar: render_rational(&p.h0),
        trends: trends(&rows),
        rows,
    })
}
