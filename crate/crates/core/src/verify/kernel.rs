//! `η₀` as graded matrices `F_{l,s,s}(w) → F_{l,s,s+1}(w − s − 1)` and the
//! dimensions of its kernel.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Library;
use crate::engine::{run_checks, Check, EngineError, ModeOperator, Outcome, RelationReport, Severity};
use crate::fock::{basis, Charges, FockState, FockVector};
use crate::scalar::{rational, Rational};

use super::linalg::{bareiss_rank, mat_mul, rank_q, specialize, Matrix};
use super::Resolved;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelRow {
    pub l: i64,
    pub s: i64,
    pub weight: usize,
    pub dim: usize,
    /// Weight of the target component, `None` when it would be negative.
    pub target_weight: Option<usize>,
    pub rank: usize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelTable {
    pub rows: Vec<KernelRow>,
}

impl KernelTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,s,weight,dim,target_weight,rank,kernel_dim\n");
        for r in &self.rows {
            let tw = r.target_weight.map_or(String::from("-"), |w| w.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.l, r.s, r.weight, r.dim, tw, r.rank, r.kernel_dim
            ));
        }
        out
    }
}

/// One graded block of a mode operator: source basis, target basis and the
/// matrix (rows = target states).
pub struct Block {
    pub source: Vec<FockState>,
    pub target: Vec<FockState>,
    pub matrix: Matrix,
}

/// The block of `op` on weight `w` of the sector `charges`, mapping into the
/// single output weight fixed by homogeneity.
pub fn block(lib: &Library, op: &ModeOperator, charges: Charges, w: usize) -> Result<Block, EngineError> {
    let source = basis(charges, w);
    let drop = op.inner().max_weight_drop(&charges)?;
    let images = op.inner().charge_images(&charges, lib.level())?;
    let target_w = w as i64 - drop;
    let target = match images.as_slice() {
        [c] if target_w >= 0 => basis(*c, target_w as usize),
        _ => Vec::new(),
    };
    let index: BTreeMap<&FockState, usize> = target.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut matrix = vec![vec![crate::scalar::Scalar::zero(); source.len()]; target.len()];
    for (j, s) in source.iter().enumerate() {
        let v = lib
            .engine()
            .apply(op, &FockVector::basis(s.clone()), target_w.max(0) as usize)?;
        for (t, c) in v.iter() {
            match index.get(t) {
                Some(&i) => matrix[i][j] = c.clone(),
                None => {
                    return Err(EngineError::Invalid(format!("{op} maps {s} outside the graded target: {t}")));
                }
            }
        }
    }
    Ok(Block { source, target, matrix })
}

/// Kernel dimensions of `η₀` on `F_{l,s,s}(w)`, `w ≤ w_max`.
pub fn kernel_dimensions(lib: &Library, l: i64, s: i64, w_max: usize) -> Result<KernelTable, EngineError> {
    let eta0 = lib.eta0()?;
    let mut rows = Vec::new();
    for w in 0..=w_max {
        let b = block(lib, &eta0, Charges::int(l, s, s), w)?;
        let rank = bareiss_rank(&b.matrix)?;
        let target_weight = (w as i64 - (s + 1)).try_into().ok();
        rows.push(KernelRow {
            l,
            s,
            weight: w,
            dim: b.source.len(),
            target_weight,
            rank,
            kernel_dim: b.source.len() - rank,
        });
    }
    Ok(KernelTable { rows })
}

/// Points for the specialized-rank oracle, away from `k ∈ {0, −2}`.
fn sample_points() -> [(Rational, Rational); 3] {
    [
        (rational(3, 1), rational(1, 10)),
        (rational(7, 3), rational(2, 7)),
        (rational(-5, 2), rational(3, 1)),
    ]
}

fn sectors(r: &Resolved) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = r.charges.iter().map(|c| (c.l.to_integer(), c.s)).collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn kernel_reports(lib: &Library, r: &Resolved, params: &BTreeMap<String, String>) -> Vec<RelationReport> {
    let mut compose_checks = Vec::new();
    let mut rank_checks = Vec::new();
    for (l, s) in sectors(r) {
        for w in 0..=r.kernel_weight {
            let label = format!("{} w={w}", Charges::int(l, s, s));
            compose_checks.push(Check::new(vec![], label.clone(), move || {
                let eta0 = lib.eta0()?;
                let first = block(lib, &eta0, Charges::int(l, s, s), w)?;
                let w2 = w as i64 - (s + 1);
                if w2 < 0 {
                    return Ok(Outcome::Pass);
                }
                let second = block(lib, &eta0, Charges::int(l, s, s + 1), w2 as usize)?;
                let prod = mat_mul(&second.matrix, &first.matrix, first.source.len());
                let nonzero = prod.iter().flatten().filter(|x| !x.is_zero()).count();
                Ok(if nonzero == 0 {
                    Outcome::Pass
                } else {
                    Outcome::Residual(format!("{nonzero} nonzero entries"))
                })
            }));
            rank_checks.push(Check::new(vec![], label, move || {
                let b = block(lib, &lib.eta0()?, Charges::int(l, s, s), w)?;
                let rank = bareiss_rank(&b.matrix)?;
                let mut oracle = 0;
                for (k0, h0) in sample_points() {
                    if let Ok(q) = specialize(&b.matrix, &k0, &h0) {
                        oracle = oracle.max(rank_q(&q));
                    }
                }
                let dims = format!("dim {} rank {} kernel {}", b.source.len(), rank, b.source.len() - rank);
                Ok(if oracle == rank {
                    Outcome::Note(dims)
                } else {
                    Outcome::Mismatch(format!("{dims}; specialized rank {oracle}"))
                })
            }));
        }
    }
    vec![
        RelationReport::new(
            "eta0_eta0_graded",
            Severity::Asserted,
            params.clone(),
            run_checks(compose_checks),
        ),
        RelationReport::new(
            "eta0_kernel_rank",
            Severity::Asserted,
            params.clone(),
            run_checks(rank_checks),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::graded_dimension;
    use crate::level::Level;

    #[test]
    fn weight_zero_row() {
        let lib = Library::new(Level::Symbolic);
        let t = kernel_dimensions(&lib, 0, 0, 2).unwrap();
        assert_eq!(t.rows[0].dim, 1);
        // η₀|0;0,0⟩ = 0: the vacuum is in the kernel
        assert_eq!(t.rows[0].kernel_dim, 1);
        for row in &t.rows {
            assert_eq!(row.dim as u64, graded_dimension(row.weight));
            assert_eq!(row.kernel_dim, row.dim - row.rank);
        }
        assert_eq!(t.rows[2].dim, 9);
    }
}
