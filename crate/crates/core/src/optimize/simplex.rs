//! Dense two-phase tableau simplex with Bland's rule, in multiprecision floats.

use crate::error::{Error, Result};
use rug::ops::NegAssign;
use rug::{Assign, Float};

/// maximize c·y subject to A y ≤ b, y ≥ 0.
pub struct LinearProgram {
    pub a: Vec<Vec<Float>>,
    pub b: Vec<Float>,
    pub c: Vec<Float>,
}

pub struct Solution {
    pub y: Vec<Float>,
    /// Row i holds with equality at the optimum.
    pub active: Vec<bool>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<Float>>,
    rhs: Vec<Float>,
    basis: Vec<usize>,
    /// reduced costs c_j − c_B B⁻¹ A_j for the current phase
    cost: Vec<Float>,
    eps: Float,
    tmp: Float,
    pivots: usize,
}

impl Tableau {
    /// Bland: smallest improving column, then smallest basic index among ratio ties.
    fn step(&mut self, allowed: usize) -> Result<bool> {
        let Some(col) = (0..allowed).find(|&j| self.cost[j] > self.eps) else {
            return Ok(false);
        };
        let mut best: Option<(usize, Float)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if row[col] <= self.eps {
                continue;
            }
            let ratio = Float::with_val(self.eps.prec(), &self.rhs[i] / &row[col]);
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        let Some((r, _)) = best else {
            return Err(Error::Invalid("linear program is unbounded".into()));
        };
        self.pivot(r, col);
        Ok(true)
    }

    fn pivot(&mut self, r: usize, col: usize) {
        self.pivots += 1;
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        self.rhs[r] /= &p;
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&k| !self.rows[r][k].is_zero()).collect();
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for &k in &nz {
                self.tmp.assign(&f * &prow[k]);
                self.rows[i][k] -= &self.tmp;
            }
            self.rows[i][col] = Float::new(self.eps.prec());
            self.tmp.assign(&f * &prhs);
            self.rhs[i] -= &self.tmp;
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for &k in &nz {
                self.tmp.assign(&f * &prow[k]);
                self.cost[k] -= &self.tmp;
            }
            self.cost[col] = Float::new(self.eps.prec());
        }
        self.rows[r] = prow;
        self.basis[r] = col;
    }

    fn set_cost(&mut self, c: &[Float]) {
        let prec = self.eps.prec();
        let mut cost: Vec<Float> = (0..self.rows[0].len()).map(|j| Float::with_val(prec, c.get(j).unwrap_or(&Float::new(prec)))).collect();
        for (i, &bi) in self.basis.iter().enumerate() {
            let Some(cb) = c.get(bi) else { continue };
            if cb.is_zero() {
                continue;
            }
            for (k, x) in self.rows[i].iter().enumerate() {
                if !x.is_zero() {
                    self.tmp.assign(cb * x);
                    cost[k] -= &self.tmp;
                }
            }
        }
        self.cost = cost;
    }
}

/// Solves the program at precision `prec`; `Error::Infeasible` when no point satisfies A y ≤ b.
pub fn solve(lp: &LinearProgram, prec: u32) -> Result<Solution> {
    let m = lp.a.len();
    let n = lp.c.len();
    let eps = Float::with_val(prec, 1) >> (prec * 3 / 4);
    let neg: Vec<usize> = (0..m).filter(|&i| lp.b[i] < 0).collect();
    let width = n + m + neg.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Float::new(prec); width];
        let flip = lp.b[i] < 0;
        for (j, v) in lp.a[i].iter().enumerate() {
            row[j] = Float::with_val(prec, v);
            if flip {
                row[j].neg_assign();
            }
        }
        row[n + i] = Float::with_val(prec, if flip { -1 } else { 1 });
        let mut bi = Float::with_val(prec, &lp.b[i]);
        if flip {
            let k = neg.iter().position(|&x| x == i).expect("flipped row");
            row[n + m + k] = Float::with_val(prec, 1);
            bi = -bi;
            basis.push(n + m + k);
        } else {
            basis.push(n + i);
        }
        rows.push(row);
        rhs.push(bi);
    }
    let mut t = Tableau { rows, rhs, basis, cost: vec![], eps, tmp: Float::new(prec), pivots: 0 };

    if !neg.is_empty() {
        // phase 1: maximize −Σ artificials
        let mut c1 = vec![Float::new(prec); width];
        for x in c1.iter_mut().skip(n + m) {
            *x = Float::with_val(prec, -1);
        }
        t.set_cost(&c1);
        while t.step(width)? {}
        let mut infeas = Float::new(prec);
        for (i, &bi) in t.basis.iter().enumerate() {
            if bi >= n + m {
                infeas += &t.rhs[i];
            }
        }
        let scale = lp.b.iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
        if infeas.to_f64() > t.eps.to_f64() * scale * 1e6 {
            return Err(Error::Infeasible);
        }
        // drive remaining artificials out of the basis
        for i in 0..m {
            if t.basis[i] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| Float::with_val(53, t.rows[i][j].abs_ref()) > t.eps) {
                    t.pivot(i, col);
                }
            }
        }
    }
    // phase 2 on the original columns; redundant rows keep a zero-level artificial
    t.set_cost(&lp.c);
    while t.step(n + m)? {}
    let mut y = vec![Float::new(prec); n];
    let mut slack_basic = vec![false; m];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            y[bi] = t.rhs[i].clone();
        } else if bi < n + m && t.rhs[i] > t.eps {
            slack_basic[bi - n] = true;
        }
    }
    Ok(Solution { y, active: slack_basic.into_iter().map(|b| !b).collect(), pivots: t.pivots })
}
