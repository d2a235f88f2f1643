use crate::afe::Evaluation;
use crate::error::{Error, Result};
use crate::lmodel::ramanujan_bound;
use crate::numerics::hexfloat;
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Weights c_j for a list of evaluations, Σc_j = 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightVector {
    /// Test-function labels, aligned with `c`.
    pub betas: Vec<String>,
    #[serde(with = "hexfloat::vec")]
    pub c: Vec<Float>,
    /// Symbols left out of the objective; their combined multipliers are reported, not bounded.
    pub free: Vec<u64>,
    /// ‖K‖∞ ‖K⁻¹‖∞ of the bordered normal system.
    pub condition: f64,
}

/// Result of `combine`.
#[derive(Clone, Debug)]
pub struct Combination {
    pub value: Float,
    pub l1_error: f64,
    /// Σ_j c_j δ_q^{(j)} for every symbol.
    pub deltas: BTreeMap<u64, Float>,
    pub tail: f64,
}

pub(crate) fn check_compatible(evals: &[Evaluation]) -> Result<()> {
    let Some(first) = evals.first() else {
        return Err(Error::Invalid("no evaluations".into()));
    };
    for e in evals {
        if e.s != first.s || e.instance_label != first.instance_label {
            return Err(Error::Invalid(format!(
                "evaluations mix points or instances: {} at {}+{}i vs {} at {}+{}i",
                first.instance_label, first.s.re, first.s.im, e.instance_label, e.s.re, e.s.im
            )));
        }
    }
    Ok(())
}

pub(crate) fn work_prec(evals: &[Evaluation]) -> u32 {
    evals.iter().map(|e| e.known_part.prec()).max().unwrap_or(64)
}

/// Symbols appearing in any evaluation.
pub(crate) fn all_symbols(evals: &[Evaluation]) -> BTreeSet<u64> {
    evals.iter().flat_map(|e| e.deltas.keys().copied()).collect()
}

/// Gauss-Jordan on [K | I | rhs] with partial pivoting. Returns (solution, condition estimate).
fn solve_bordered(mut k: Vec<Vec<Float>>, rhs: Vec<Float>, prec: u32) -> Result<(Vec<Float>, f64)> {
    let n = k.len();
    let norm_inf = |m: &[Vec<Float>]| -> f64 {
        m.iter().map(|r| r.iter().map(|x| x.to_f64().abs()).sum::<f64>()).fold(0.0, f64::max)
    };
    let k_norm = norm_inf(&k);
    let scale = k.iter().flat_map(|r| r.iter()).map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    let tiny = scale * 2f64.powi(-(prec as i32 - 8));
    for (i, row) in k.iter_mut().enumerate() {
        row.extend((0..n).map(|j| Float::with_val(prec, (i == j) as u32)));
        row.push(Float::with_val(prec, &rhs[i]));
    }
    let width = 2 * n + 1;
    let mut tmp = Float::new(prec);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| k[a][col].cmp_abs(&k[b][col]).unwrap_or(std::cmp::Ordering::Equal))
            .expect("rows");
        if k[piv][col].to_f64().abs() <= tiny || k[piv][col].is_zero() {
            return Err(Error::Singular { condition: f64::INFINITY });
        }
        k.swap(col, piv);
        let p = k[col][col].clone();
        for x in k[col].iter_mut() {
            *x /= &p;
        }
        let pivot_row = k[col].clone();
        for (r, row) in k.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in col..width {
                tmp.assign(&f * &pivot_row[c]);
                row[c] -= &tmp;
            }
        }
    }
    let inv: Vec<Vec<Float>> = k.iter().map(|r| r[n..2 * n].to_vec()).collect();
    let cond = k_norm * norm_inf(&inv);
    Ok((k.into_iter().map(|mut r| r.pop().expect("rhs")).collect(), cond))
}

/// Minimizes Σ_q (C Ram(q,d))² (Σ_j c_j δ_q^{(j)})² over symbols q < symbol_cut not in `free`,
/// subject to Σ c_j = 1.
pub fn ls_weights(evals: &[Evaluation], symbol_cut: u64, d: u32, c: f64, free: &[u64]) -> Result<WeightVector> {
    check_compatible(evals)?;
    let j = evals.len();
    // forming M squares the conditioning of the δ vectors
    let prec = 2 * work_prec(evals) + 64;
    let symbols: Vec<u64> = all_symbols(evals).into_iter().filter(|q| *q < symbol_cut && !free.contains(q)).collect();
    let zero = Float::new(prec);
    let cols: Vec<Vec<&Float>> =
        evals.iter().map(|e| symbols.iter().map(|q| e.delta(*q).unwrap_or(&zero)).collect()).collect();
    let w: Vec<Float> = symbols
        .iter()
        .map(|q| {
            let r = Float::with_val(prec, c) * Float::with_val(prec, ramanujan_bound(*q, d));
            Float::with_val(prec, r.square_ref())
        })
        .collect();
    // bordered system [[2M, 1], [1ᵀ, 0]]
    let mut k = vec![vec![Float::new(prec); j + 1]; j + 1];
    let mut tmp = Float::new(prec);
    for a in 0..j {
        for b in a..j {
            let mut acc = Float::new(prec);
            for (i, wq) in w.iter().enumerate() {
                tmp.assign(cols[a][i] * cols[b][i]);
                tmp *= wq;
                acc += &tmp;
            }
            acc *= 2u32;
            k[a][b] = acc.clone();
            k[b][a] = acc;
        }
        k[a][j] = Float::with_val(prec, 1);
        k[j][a] = Float::with_val(prec, 1);
    }
    // scaling M leaves the minimizer unchanged and keeps it commensurate with the border
    let m_max = (0..j).flat_map(|a| (0..j).map(move |b| (a, b))).map(|(a, b)| k[a][b].to_f64().abs()).fold(0.0, f64::max);
    if m_max > 0.0 {
        for row in k.iter_mut().take(j) {
            for x in row.iter_mut().take(j) {
                *x /= m_max;
            }
        }
    }
    let mut rhs = vec![Float::new(prec); j + 1];
    rhs[j] = Float::with_val(prec, 1);
    let (sol, condition) = solve_bordered(k, rhs, prec)?;
    let mut cw: Vec<Float> = sol.into_iter().take(j).collect();
    let total = cw.iter().fold(Float::new(prec), |a, x| a + x);
    if total.is_zero() {
        return Err(Error::Singular { condition });
    }
    for x in cw.iter_mut() {
        *x /= &total;
    }
    Ok(WeightVector {
        betas: evals.iter().map(|e| e.g.to_string()).collect(),
        c: cw,
        free: free.to_vec(),
        condition,
    })
}

/// Σ c_j known_j with error Σ_q |Σ_j c_j δ_q^{(j)}| C Ram(q,d) + Σ |c_j| tail_j; free symbols are
/// reported in `deltas` but excluded from the error.
pub fn combine(evals: &[Evaluation], w: &WeightVector, d: u32, c: f64) -> Result<Combination> {
    if evals.len() != w.c.len() {
        return Err(Error::Invalid(format!("{} evaluations but {} weights", evals.len(), w.c.len())));
    }
    check_compatible(evals)?;
    let prec = work_prec(evals);
    let mut value = Float::new(prec);
    let mut deltas: BTreeMap<u64, Float> = BTreeMap::new();
    let mut tail = 0.0;
    for (e, cj) in evals.iter().zip(&w.c) {
        value += Float::with_val(prec, &e.known_part * cj);
        for (q, dv) in &e.deltas {
            *deltas.entry(*q).or_insert_with(|| Float::new(prec)) += Float::with_val(prec, &dv.0 * cj);
        }
        tail += cj.to_f64().abs() * e.tail_bound;
    }
    let mut l1 = tail;
    for (q, v) in &deltas {
        if !w.free.contains(q) {
            l1 += v.to_f64().abs() * c * ramanujan_bound(*q, d) as f64;
        }
    }
    Ok(Combination { value, l1_error: l1, deltas, tail })
}

/// Σ_q (C Ram)² (Σ_j c_j δ_q)², the quantity `ls_weights` minimizes.
pub fn ls_objective(evals: &[Evaluation], cw: &[Float], symbol_cut: u64, d: u32, c: f64, free: &[u64]) -> Float {
    let prec = work_prec(evals);
    let mut out = Float::new(prec);
    for q in all_symbols(evals) {
        if q >= symbol_cut || free.contains(&q) {
            continue;
        }
        let mut s = Float::new(prec);
        for (e, cj) in evals.iter().zip(cw) {
            if let Some(v) = e.delta(q) {
                s += Float::with_val(prec, v * cj);
            }
        }
        s *= c * ramanujan_bound(q, d) as f64;
        out += s.square();
    }
    out
}
