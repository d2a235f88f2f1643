//! Plain-text functional-equation files.
//!
//! ```text
//! # comment
//! label: stan
//! degree: 5
//! Q: 1/4 * pi^(-5/2)
//! gamma: 1/2 0 0
//! gamma: 1 18 0
//! gamma: 1 19 0
//! epsilon: 1 0
//! pole: 1 0 1 0
//! ```
//!
//! `Q` is `<rational> [* pi^(<rational>)] [* sqrt(<rational>)]`. Each `gamma` line is
//! `kappa re(lambda) im(lambda)`, each `pole` line `re(s) im(s) re(r) im(r)`, all exact rationals.

use crate::error::{Error, Result};
use crate::lmodel::fe::{CRat, FunctionalEquation, GammaShift, Pole, QConstant};
use crate::numerics::parse_rational;
use rug::Rational;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn rats(line: usize, text: &str, count: usize) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != count {
        return Err(perr(line, format!("expected {count} numbers, found {}", parts.len())));
    }
    parts
        .iter()
        .map(|p| parse_rational(p).map_err(|e| perr(line, e.to_string())))
        .collect()
}

fn parse_q(line: usize, text: &str) -> Result<QConstant> {
    let mut q = QConstant::new(Rational::from(1), Rational::new());
    let mut first = true;
    for part in text.split('*').map(str::trim) {
        if let Some(inner) = part.strip_prefix("pi^") {
            let inner = inner.trim().trim_start_matches('(').trim_end_matches(')');
            q.pi_exp += parse_rational(inner).map_err(|e| perr(line, e.to_string()))?;
        } else if let Some(inner) = part.strip_prefix("sqrt(") {
            let inner = inner.trim_end_matches(')');
            q.sqrt_of *= parse_rational(inner).map_err(|e| perr(line, e.to_string()))?;
        } else if first {
            q.rational = parse_rational(part).map_err(|e| perr(line, e.to_string()))?;
        } else {
            return Err(perr(line, format!("unexpected factor '{part}' in Q")));
        }
        first = false;
    }
    Ok(q)
}

pub fn parse_fe(text: &str) -> Result<FunctionalEquation> {
    let mut label = None;
    let mut degree = None;
    let mut q = None;
    let mut epsilon = None;
    let mut shifts = Vec::new();
    let mut poles = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once(':').ok_or_else(|| perr(line, "expected 'key: value'"))?;
        let value = value.trim();
        match key.trim() {
            "label" => label = Some(value.to_string()),
            "degree" => degree = Some(value.parse::<u32>().map_err(|e| perr(line, e.to_string()))?),
            "Q" => q = Some(parse_q(line, value)?),
            "gamma" => {
                let r = rats(line, value, 3)?;
                shifts.push(GammaShift {
                    kappa: r[0].clone(),
                    lambda: CRat::new(r[1].clone(), r[2].clone()),
                });
            }
            "epsilon" => {
                let r = rats(line, value, 2)?;
                epsilon = Some(CRat::new(r[0].clone(), r[1].clone()));
            }
            "pole" => {
                let r = rats(line, value, 4)?;
                poles.push(Pole {
                    s: CRat::new(r[0].clone(), r[1].clone()),
                    residue: CRat::new(r[2].clone(), r[3].clone()),
                });
            }
            other => return Err(perr(line, format!("unknown key '{other}'"))),
        }
    }
    let fe = FunctionalEquation {
        label: label.ok_or_else(|| perr(0, "missing label"))?,
        degree: degree.ok_or_else(|| perr(0, "missing degree"))?,
        q: q.ok_or_else(|| perr(0, "missing Q"))?,
        shifts,
        epsilon: epsilon.ok_or_else(|| perr(0, "missing epsilon"))?,
        poles,
    };
    fe.validate()?;
    Ok(fe)
}

pub fn format_fe(fe: &FunctionalEquation) -> String {
    let mut out = format!("label: {}\ndegree: {}\nQ: {}", fe.label, fe.degree, fe.q.rational);
    if !fe.q.pi_exp.is_zero() {
        out += &format!(" * pi^({})", fe.q.pi_exp);
    }
    if fe.q.sqrt_of != 1 {
        out += &format!(" * sqrt({})", fe.q.sqrt_of);
    }
    out.push('\n');
    for g in &fe.shifts {
        out += &format!("gamma: {} {} {}\n", g.kappa, g.lambda.re, g.lambda.im);
    }
    out += &format!("epsilon: {} {}\n", fe.epsilon.re, fe.epsilon.im);
    for p in &fe.poles {
        out += &format!("pole: {} {} {} {}\n", p.s.re, p.s.im, p.residue.re, p.residue.im);
    }
    out
}
