use crate::afe::{error_l1, Evaluation};
use crate::error::Result;
use crate::lmodel::ramanujan_bound;
use crate::optimize::ls::{all_symbols, check_compatible, work_prec};
use crate::optimize::simplex::{solve, LinearProgram};
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    /// Z at the common point.
    Value,
    /// The unknown coefficient b_q.
    Symbol(u64),
}

impl Objective {
    pub fn label(&self) -> String {
        match self {
            Objective::Value => "value".into(),
            Objective::Symbol(q) => format!("b_{q}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub objective_label: String,
    pub min: Float,
    pub max: Float,
    /// One flag per pairwise inequality (two per non-reference evaluation) at the (min, max) optimum.
    pub certificate: (Vec<bool>, Vec<bool>),
    /// Index of the evaluation used as objective and reference.
    pub reference: usize,
    pub variables: usize,
    pub pivots: usize,
}

impl LpResult {
    pub fn midpoint(&self) -> Float {
        Float::with_val(self.min.prec(), &self.min + &self.max) / 2u32
    }

    pub fn halfwidth(&self) -> Float {
        Float::with_val(self.min.prec(), &self.max - &self.min) / 2u32
    }
}

/// Options shared by `lp_bounds` and `recover_coefficients`.
#[derive(Clone, Debug)]
pub struct LpSetup {
    pub symbol_cut: u64,
    pub d: u32,
    pub c: f64,
    pub tail_slack: f64,
}

struct Built {
    lp_rows: Vec<Vec<Float>>,
    lp_rhs: Vec<Float>,
    vars: Vec<u64>,
    upper: Vec<Float>,
    reference: usize,
    pairs: usize,
    /// δ_ref on the variables; the value objective is known_ref + δ_ref·(y − U).
    ref_delta: Vec<Float>,
    ref_outer: f64,
    prec: u32,
    d: u32,
    c: f64,
}

fn build(evals: &[Evaluation], setup: &LpSetup) -> Result<Built> {
    check_compatible(evals)?;
    let prec = work_prec(evals) + 64;
    let zero = Float::new(prec);
    let all = all_symbols(evals);
    let vars: Vec<u64> = all.iter().copied().filter(|q| *q < setup.symbol_cut).collect();
    let outer: Vec<u64> = all.iter().copied().filter(|q| *q >= setup.symbol_cut).collect();
    let bound = |q: u64| setup.c * ramanujan_bound(q, setup.d) as f64;
    let upper: Vec<Float> = vars.iter().map(|q| Float::with_val(prec, bound(*q))).collect();
    let reference = (0..evals.len())
        .min_by(|&a, &b| {
            error_l1(&evals[a], setup.d, setup.c).total_cmp(&error_l1(&evals[b], setup.d, setup.c))
        })
        .expect("nonempty");
    let er = &evals[reference];
    let ref_delta: Vec<Float> = vars.iter().map(|q| Float::with_val(prec, er.delta(*q).unwrap_or(&zero))).collect();
    let ref_outer = er.tail_bound + outer.iter().map(|q| er.delta(*q).map_or(0.0, |v| v.to_f64().abs()) * bound(*q)).sum::<f64>();

    let mut lp_rows = Vec::new();
    let mut lp_rhs = Vec::new();
    let mut pairs = 0;
    for (j, ej) in evals.iter().enumerate() {
        if j == reference {
            continue;
        }
        pairs += 1;
        let a: Vec<Float> = vars
            .iter()
            .map(|q| Float::with_val(prec, er.delta(*q).unwrap_or(&zero) - ej.delta(*q).unwrap_or(&zero)))
            .collect();
        let k = Float::with_val(prec, &er.known_part - &ej.known_part);
        let mut r = er.tail_bound + ej.tail_bound + setup.tail_slack;
        for q in &outer {
            let dq = Float::with_val(prec, er.delta(*q).unwrap_or(&zero) - ej.delta(*q).unwrap_or(&zero));
            r += dq.to_f64().abs() * bound(*q);
        }
        let r = Float::with_val(prec, r);
        // a·U, shifting x = y − U onto y ≥ 0
        let mut au = Float::new(prec);
        for (ai, ui) in a.iter().zip(&upper) {
            au += Float::with_val(prec, ai * ui);
        }
        let scale = a.iter().map(|x| Float::with_val(prec, x.abs_ref())).fold(Float::new(prec), |m, x| if x > m { x } else { m });
        let scale = if scale.is_zero() { Float::with_val(prec, 1) } else { scale };
        // a·x ≤ R − k   and   −a·x ≤ R + k
        let up: Vec<Float> = a.iter().map(|x| Float::with_val(prec, x / &scale)).collect();
        let dn: Vec<Float> = up.iter().map(|x| Float::with_val(prec, -x)).collect();
        lp_rows.push(up);
        lp_rhs.push((Float::with_val(prec, &r - &k) + &au) / &scale);
        lp_rows.push(dn);
        lp_rhs.push((Float::with_val(prec, &r + &k) - &au) / &scale);
    }
    for (i, u) in upper.iter().enumerate() {
        let mut row = vec![Float::new(prec); vars.len()];
        row[i] = Float::with_val(prec, 1);
        lp_rows.push(row);
        lp_rhs.push(Float::with_val(prec, u * 2u32));
    }
    Ok(Built { lp_rows, lp_rhs, vars, upper, reference, pairs, ref_delta, ref_outer, prec, d: setup.d, c: setup.c })
}

/// Minimum and maximum of the objective over all coefficient vectors inside the Ramanujan box
/// that make every evaluation agree with the reference one up to the tails.
pub fn lp_bounds(evals: &[Evaluation], objective: &Objective, setup: &LpSetup) -> Result<LpResult> {
    let b = build(evals, setup)?;
    lp_on(evals, &b, objective)
}

fn lp_on(evals: &[Evaluation], b: &Built, objective: &Objective) -> Result<LpResult> {
    let prec = b.prec;
    let nv = b.vars.len();
    let (cost, outer): (Vec<Float>, f64) = match objective {
        Objective::Value => {
            let m = b.ref_delta.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
            let m = if m > 0.0 { m } else { 1.0 };
            (b.ref_delta.iter().map(|x| Float::with_val(prec, x / m)).collect(), b.ref_outer)
        }
        Objective::Symbol(q) => {
            let mut c = vec![Float::new(prec); nv];
            match b.vars.iter().position(|v| v == q) {
                Some(i) => c[i] = Float::with_val(prec, 1),
                None => {
                    let u = Float::with_val(prec, b.c * ramanujan_bound(*q, b.d) as f64);
                    return Ok(LpResult {
                        objective_label: objective.label(),
                        min: Float::with_val(prec, -&u),
                        max: u,
                        certificate: (vec![false; 2 * b.pairs], vec![false; 2 * b.pairs]),
                        reference: b.reference,
                        variables: nv,
                        pivots: 0,
                    });
                }
            }
            (c, 0.0)
        }
    };
    let eval_at = |y: &[Float]| -> Float {
        match objective {
            Objective::Value => {
                let mut v = Float::with_val(prec, &evals[b.reference].known_part);
                for ((d, yi), u) in b.ref_delta.iter().zip(y).zip(&b.upper) {
                    v += Float::with_val(prec, yi - u) * d;
                }
                v
            }
            Objective::Symbol(q) => {
                let i = b.vars.iter().position(|v| v == q).expect("variable");
                Float::with_val(prec, &y[i] - &b.upper[i])
            }
        }
    };
    let solve_dir = |sign: i32| -> Result<(Float, Vec<bool>, usize)> {
        let c: Vec<Float> = cost.iter().map(|x| Float::with_val(prec, x * sign)).collect();
        let lp = LinearProgram { a: b.lp_rows.clone(), b: b.lp_rhs.clone(), c };
        let sol = solve(&lp, prec)?;
        Ok((eval_at(&sol.y), sol.active[..2 * b.pairs].to_vec(), sol.pivots))
    };
    let (lo, hi) = rayon::join(|| solve_dir(-1), || solve_dir(1));
    let (lo, lo_act, p1) = lo?;
    let (hi, hi_act, p2) = hi?;
    let out = Float::with_val(prec, outer);
    Ok(LpResult {
        objective_label: objective.label(),
        min: lo - &out,
        max: hi + &out,
        certificate: (lo_act, hi_act),
        reference: b.reference,
        variables: nv,
        pivots: p1 + p2,
    })
}

/// Interval (midpoint, halfwidth) for each requested unknown coefficient.
pub fn recover_coefficients(
    evals: &[Evaluation],
    symbols: &[u64],
    setup: &LpSetup,
) -> Result<BTreeMap<u64, (Float, Float)>> {
    let b = build(evals, setup)?;
    let out: Result<Vec<(u64, (Float, Float))>> = symbols
        .par_iter()
        .map(|q| {
            let r = lp_on(evals, &b, &Objective::Symbol(*q))?;
            Ok((*q, (r.midpoint(), r.halfwidth())))
        })
        .collect();
    Ok(out?.into_iter().collect())
}
