use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;
use rug::{Assign, Complex, Float};

/// Horner evaluation of sum c_i x^i (coefficients in ascending order).
pub fn poly_eval(coeffs: &[Complex], x: &Complex) -> Complex {
    let p = x.prec().0;
    let mut acc = Complex::new(p);
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

/// All roots of sum c_i x^i (ascending order, degree <= 8) by Aberth iteration.
pub fn poly_roots(coeffs: &[Complex], ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let mut c: Vec<Complex> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    if c.is_empty() || c.last().unwrap().is_zero() {
        return Err(Error::Invalid("zero polynomial".into()));
    }
    let n = c.len() - 1;
    if n > 8 {
        return Err(Error::Invalid(format!("degree {n} exceeds 8")));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let p = ctx.working_bits + 32;
    let lead = Complex::with_val(p, &c[n]);
    let monic: Vec<Complex> = c.iter().map(|a| Complex::with_val(p, a / &lead)).collect();
    let deriv: Vec<Complex> = (1..=n).map(|i| Complex::with_val(p, &monic[i] * i as u32)).collect();

    let mut radius: f64 = 0.0;
    for (i, a) in monic.iter().enumerate().take(n) {
        let m = Float::with_val(53, a.abs_ref()).to_f64();
        if m > 0.0 {
            radius = radius.max(m.powf(1.0 / (n - i) as f64));
        }
    }
    if radius == 0.0 {
        radius = 1.0;
    }
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::with_val(p, (radius * th.cos(), radius * th.sin()))
        })
        .collect();

    let tol = Float::with_val(53, 1) >> (p - 24);
    let mut converged = false;
    let mut tmp = Complex::new(p);
    for _ in 0..2000 {
        let mut worst = Float::new(53);
        for k in 0..n {
            let pv = poly_eval(&monic, &z[k]);
            if pv.is_zero() {
                continue;
            }
            let dv = poly_eval(&deriv, &z[k]);
            let ratio = Complex::with_val(p, &pv / &dv);
            let mut sum = Complex::new(p);
            for j in 0..n {
                if j != k {
                    tmp.assign(&z[k] - &z[j]);
                    tmp.recip_mut();
                    sum += &tmp;
                }
            }
            let mut denom = Complex::with_val(p, &ratio * &sum);
            denom = 1 - denom;
            let w = Complex::with_val(p, &ratio / &denom);
            let scale = Float::with_val(53, z[k].abs_ref()).max(&Float::with_val(53, 1e-30));
            let rel = Float::with_val(53, w.abs_ref()) / scale;
            if rel > worst {
                worst = rel;
            }
            z[k] -= &w;
        }
        if worst <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "Aberth iteration", detail: format!("degree {n}") });
    }
    let norm = c
        .iter()
        .map(|a| Float::with_val(53, a.abs_ref()).to_f64())
        .fold(0.0, f64::max);
    let limit = norm * 2f64.powi(-(ctx.working_bits as i32) / 2);
    let out: Vec<Complex> = z.into_iter().map(|r| Complex::with_val(ctx.working_bits, r)).collect();
    for r in &out {
        let res = Float::with_val(53, poly_eval(c.as_slice(), &Complex::with_val(p, r)).abs_ref()).to_f64();
        if res >= limit {
            return Err(Error::NonConvergence { what: "Aberth iteration", detail: format!("residual {res:e}") });
        }
    }
    Ok(out)
}
