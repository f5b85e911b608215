//! The relation suite on evaluation modules, at `c = 0`.

use crate::algebra::eval::{EvalGen, EvalModule, EvalOp, EvalVector};
use crate::engine::RelationReport;
use crate::scalar::Scalar;

use super::families::{d_reports, exchange_reports, Gen, Generators};
use super::Resolved;

fn eval_gen(g: Gen) -> EvalGen {
    match g {
        Gen::E => EvalGen::E,
        Gen::F => EvalGen::F,
        Gen::Hp => EvalGen::Hp,
        Gen::Hm => EvalGen::Hm,
    }
}

/// Probes `w_m ⊗ u^a` with `|a| ≤ window`.
pub(crate) fn eval_probes(l: u32, window: i64) -> Vec<(String, EvalVector)> {
    let mut out = Vec::new();
    for m in 0..=l {
        for a in -window..=window {
            out.push((format!("w{m}*u^{a}"), EvalVector::basis(l, m, a)));
        }
    }
    out
}

pub(crate) fn run(r: &Resolved) -> Vec<RelationReport> {
    let op = |g: Gen, m: i64| Ok(EvalOp::new(eval_gen(g), m));
    // at c = 0, (v)^m h⁺(v) has its v^{-n-1} coefficient at mode m + n
    let t_plus = |m: i64, n: i64| Ok(EvalOp::new(EvalGen::Hp, m + n));
    let t_minus = |m: i64, n: i64| Ok(EvalOp::new(EvalGen::Hm, m + n));
    let gens = Generators {
        op: &op,
        d: EvalOp::new(EvalGen::D, 0),
        t_plus: &t_plus,
        t_minus: &t_minus,
    };
    let modes: Vec<i64> = r.modes().collect();
    let mut out = Vec::new();
    for &l in &r.eval_l {
        // the floor sits well below every probe so truncated tails stay visible
        let module = EvalModule::new(l, -(r.power_window + 4 * (r.modes.1.abs() + r.n_modes.1.abs() + 4)));
        let probes = eval_probes(l, r.power_window);
        let mut params = r.params();
        params.insert("l".into(), l.to_string());
        params.insert("power_window".into(), r.power_window.to_string());
        out.extend(d_reports(&module, &gens, &modes, &probes, &params));
        out.extend(exchange_reports(
            &module,
            &gens,
            &Scalar::zero(),
            "0",
            &r.mode_pairs(),
            &probes,
            &params,
        ));
    }
    out
}
