use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;
use num_complex::Complex64;
use rug::float::Constant;
use rug::{Assign, Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// B_{2k} / (2k (2k-1)) for k = 1..len, computed from zeta(2k).
fn stirling_coeffs(prec: u32, len: usize) -> Arc<Vec<Float>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Float>>>>> = OnceLock::new();
    let bucket = prec.div_ceil(64) * 64;
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bucket) {
        if v.len() >= len {
            return v.clone();
        }
    }
    let len = len.max(bucket as usize / 3 + 24);
    let p = bucket + 32;
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let two_pi_sq = Float::with_val(p, two_pi.square_ref());
    let mut pow = Float::with_val(p, 1);
    let mut fact = Float::with_val(p, 1);
    let mut out = Vec::with_capacity(len);
    for k in 1..=len as u32 {
        pow *= &two_pi_sq;
        fact *= 2 * k - 1;
        fact *= 2 * k;
        let zeta = Float::with_val(p, Float::zeta_u(2 * k));
        // |B_2k| = 2 (2k)! zeta(2k) / (2 pi)^{2k}
        let mut b = Float::with_val(p, &fact * &zeta) * 2u32 / &pow;
        if k % 2 == 0 {
            b = -b;
        }
        b /= (2 * k) * (2 * k - 1);
        out.push(Float::with_val(bucket, b));
    }
    let arc = Arc::new(out);
    cache.lock().unwrap().insert(bucket, arc.clone());
    arc
}

fn check_pole(z: &Complex, prec: u32) -> Result<()> {
    let re = z.real();
    if re.is_sign_positive() && *re > 0.25 {
        return Ok(());
    }
    let nearest = Float::with_val(prec, re.round_ref());
    let mut dist = Float::with_val(prec, re - &nearest);
    dist.abs_mut();
    let tol = Float::with_val(prec, 1) >> (prec.saturating_sub(8));
    if dist <= tol && Float::with_val(prec, z.imag().abs_ref()) <= tol && nearest <= 0 {
        return Err(Error::GammaPole(nearest.to_f64().to_string()));
    }
    Ok(())
}

/// log Gamma(z) at `prec` bits. The imaginary part is correct modulo 2 pi only;
/// exp() of the result is Gamma(z).
pub fn ln_gamma(z: &Complex, prec: u32) -> Result<Complex> {
    check_pole(z, prec)?;
    let p = prec + 32;
    if *z.real() < 0.5 {
        // reflection: lnG(z) = ln pi - ln sin(pi z) - lnG(1 - z)
        let pi = Float::with_val(p, Constant::Pi);
        let one_minus = Complex::with_val(p, 1 - z);
        let rest = ln_gamma(&one_minus, p)?;
        let s = Complex::with_val(p, z * &pi).sin();
        let mut r = Complex::with_val(p, s.ln_ref());
        r = -r + pi.ln();
        r -= rest;
        return Ok(Complex::with_val(prec, r));
    }
    let radius = (prec / 4).max(20) as f64;
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    let shift = if im.abs() >= radius || re.hypot(im) >= radius {
        0
    } else {
        ((radius * radius - im * im).sqrt() - re).ceil().max(0.0) as u32
    };
    let mut w = Complex::with_val(p, z);
    let mut prod = Complex::with_val(p, 1);
    for _ in 0..shift {
        prod *= &w;
        w += 1u32;
    }
    let lnw = Complex::with_val(p, w.ln_ref());
    let mut res = Complex::with_val(p, &w - 0.5f64);
    res *= &lnw;
    res -= &w;
    let half_ln_2pi = (Float::with_val(p, Constant::Pi) * 2u32).ln() / 2u32;
    res += &half_ln_2pi;
    let winv = Complex::with_val(p, w.recip_ref());
    let w2inv = Complex::with_val(p, winv.square_ref());
    let mut pw = winv;
    let mut needed = (p as usize) / 3 + 24;
    let mut coeffs = stirling_coeffs(p, needed);
    let tol = Float::with_val(p, 1) >> p;
    let mut k = 0usize;
    let mut term = Complex::new(p);
    loop {
        if k >= coeffs.len() {
            needed *= 2;
            coeffs = stirling_coeffs(p, needed);
        }
        term.assign(&pw * &coeffs[k]);
        res += &term;
        let mag = Float::with_val(53, term.abs_ref());
        if mag < tol {
            break;
        }
        k += 1;
        if k > 4 * p as usize {
            return Err(Error::NonConvergence { what: "Stirling series", detail: format!("z = {re} + {im}i") });
        }
        pw *= &w2inv;
    }
    if shift > 0 {
        res -= prod.ln();
    }
    Ok(Complex::with_val(prec, res))
}

/// Gamma(z) at the context's working precision.
pub fn complex_gamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let lg = ln_gamma(z, ctx.working_bits + 16)?;
    Ok(Complex::with_val(ctx.working_bits, lg.exp()))
}

/// ln sin(pi z) without overflow for large |Im z|; the imaginary part is defined mod 2 pi.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    let i = Complex64::new(0.0, 1.0);
    let ln_2i = Complex64::new(2f64.ln(), PI / 2.0);
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i)
        -i * PI * z + ((2.0 * i * PI * z).exp() - 1.0).ln() - ln_2i
    } else {
        i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln() - ln_2i
    }
}

/// Double-precision log Gamma for magnitude profiles; Re part is accurate to ~1e-12.
pub fn ln_gamma_f64(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    if z.re < 0.5 {
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_f64(Complex64::new(1.0, 0.0) - z);
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.norm() < 15.0 {
        acc += w.ln();
        w += 1.0;
    }
    const C: [f64; 6] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0];
    let winv = w.inv();
    let w2 = winv * winv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pw = winv;
    for c in C {
        series += pw * c;
        pw *= w2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - acc
}
