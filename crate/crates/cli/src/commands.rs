//! Subcommand implementations. Each returns the full output text; nothing here depends on
//! wall-clock time or thread scheduling, so identical inputs give identical bytes.

use crate::config::RunConfig;
use crate::report::{dec, log10_6, Csv, Report};
use anyhow::{bail, Result};
use fewcoef::afe::{compute_terms, error_l1, evaluate_with_terms, AfeTerms, Evaluation};
use fewcoef::cache::TermsCache;
use fewcoef::forms::{hecke_eigenforms_s24, tau};
use fewcoef::lmodel::{LFunctionInstance, Rho, TestFunction};
use fewcoef::numerics::PrecisionContext;
use fewcoef::optimize::{combine, lp_bounds, ls_weights, recover_coefficients, LpSetup, Objective};
use fewcoef::satake::{local_factor, parse_eigen_table, round_trip_residual, solve_satake, upsilon20_table};
use rayon::prelude::*;
use rug::{Complex, Rational};
use std::path::Path;

/// An instance plus the cache and precision every evaluation of a run shares.
pub struct Session {
    pub cfg: RunConfig,
    pub instance: LFunctionInstance,
    pub cache: Option<TermsCache>,
    pub ctx: PrecisionContext,
}

impl Session {
    pub fn new(cfg: RunConfig) -> Result<Session> {
        cfg.validate()?;
        let instance = cfg.instance()?;
        let cache = cfg.cache_dir.as_ref().map(TermsCache::new).transpose()?;
        let ctx = cfg.ctx();
        Ok(Session { cfg, instance, cache, ctx })
    }

    pub fn degree(&self) -> u32 {
        self.instance.degree()
    }

    pub fn bound_c(&self) -> f64 {
        self.instance.coeffs.bound_constant.to_f64()
    }

    pub fn terms(&self, g: &TestFunction) -> Result<AfeTerms> {
        let cutoff = self.instance.coeffs.cutoff();
        Ok(match &self.cache {
            Some(c) => c.terms(&self.instance.fe, &self.cfg.s, g, cutoff, &self.ctx)?,
            None => compute_terms(&self.instance.fe, &self.cfg.s, g, cutoff, &self.ctx)?,
        })
    }

    pub fn evaluate(&self, g: &TestFunction) -> Result<(AfeTerms, Evaluation)> {
        let t = self.terms(g)?;
        let e = evaluate_with_terms(&self.instance, &t)?;
        Ok((t, e))
    }

    /// One evaluation per configured test function, in configuration order.
    pub fn evaluate_all(&self) -> Result<Vec<(Option<Rational>, AfeTerms, Evaluation)>> {
        self.cfg
            .test_functions()
            .into_par_iter()
            .map(|(b, g)| {
                let (t, e) = self.evaluate(&g)?;
                Ok((b, t, e))
            })
            .collect()
    }

    fn setup(&self, tail_slack: f64) -> LpSetup {
        LpSetup { symbol_cut: self.cfg.symbol_cut, d: self.degree(), c: self.bound_c(), tail_slack }
    }
}

fn beta_label(b: &Option<Rational>) -> String {
    b.as_ref().map_or("none".into(), |b| b.to_string())
}

fn beta_decimal(b: &Option<Rational>) -> String {
    b.as_ref().map_or("".into(), |b| format!("{:.6}", b.to_f64()))
}

pub fn cmd_eval(cfg: RunConfig, show_terms: usize, top: usize) -> Result<String> {
    let digits = cfg.digits as usize;
    let s = Session::new(cfg)?;
    let mut r = Report::new("eval", Some(&s.cfg));
    r.kv("degree", s.degree());
    for (b, t, e) in s.evaluate_all()? {
        r.section(&format!("evaluation beta={}", beta_label(&b)));
        r.evaluation(&e, Some(&t), digits, show_terms, top);
    }
    Ok(r.finish())
}

/// CSV with one row per β: value and single-evaluation error on a log10 scale.
pub fn cmd_scan(cfg: RunConfig) -> Result<String> {
    let s = Session::new(cfg)?;
    let r = Report::new("scan", Some(&s.cfg));
    let mut csv = Csv::new(&r, &["beta", "log10_abs_value", "log10_error", "value", "error"]);
    if s.cfg.betas.is_empty() {
        return Ok(csv.finish());
    }
    let (d, c) = (s.degree(), s.bound_c());
    for (b, _, e) in s.evaluate_all()? {
        let err = error_l1(&e, d, c);
        csv.row(&[
            beta_decimal(&b),
            log10_6(e.known_part.to_f64()),
            log10_6(err),
            format!("{:.12e}", e.known_part.to_f64()),
            format!("{:.6e}", err),
        ]);
    }
    Ok(csv.finish())
}

fn need_two(evals: &[Evaluation], what: &str) -> Result<()> {
    if evals.len() < 2 {
        bail!("{what} needs at least two test functions; pass --beta or --beta-range");
    }
    Ok(())
}

/// Least-squares combination. With `sweep`, CSV of the error after averaging the first J
/// evaluations for every J, in configuration order.
pub fn cmd_ls(cfg: RunConfig, sweep: bool) -> Result<String> {
    let digits = cfg.digits as usize;
    let s = Session::new(cfg)?;
    let (d, c) = (s.degree(), s.bound_c());
    let all = s.evaluate_all()?;
    let evals: Vec<Evaluation> = all.iter().map(|(_, _, e)| e.clone()).collect();
    let free = s.cfg.free.clone();
    if sweep {
        let r = Report::new("ls-sweep", Some(&s.cfg));
        let mut csv = Csv::new(&r, &["count", "beta_added", "log10_l1_error", "log10_condition", "value"]);
        for j in 1..=evals.len() {
            let row = match ls_weights(&evals[..j], s.cfg.symbol_cut, d, c, &free) {
                Ok(w) => {
                    let comb = combine(&evals[..j], &w, d, c)?;
                    vec![log10_6(comb.l1_error), log10_6(w.condition), dec(&comb.value, digits)]
                }
                Err(fewcoef::Error::Singular { condition }) => vec!["singular".into(), log10_6(condition), "".into()],
                Err(e) => return Err(e.into()),
            };
            let mut fields = vec![j.to_string(), beta_decimal(&all[j - 1].0)];
            fields.extend(row);
            csv.row(&fields);
        }
        return Ok(csv.finish());
    }
    need_two(&evals, "ls")?;
    let w = ls_weights(&evals, s.cfg.symbol_cut, d, c, &free)?;
    let comb = combine(&evals, &w, d, c)?;
    let mut r = Report::new("ls", Some(&s.cfg));
    r.kv("degree", d);
    r.section("combination");
    r.weights(&w, &comb, digits);
    for (b, _, e) in &all {
        r.section(&format!("evaluation beta={}", beta_label(b)));
        r.evaluation(e, None, digits, 0, 0);
    }
    Ok(r.finish())
}

/// LP bounds on the value. With `sweep`, CSV comparing the LS error and the LP halfwidth
/// for the first J evaluations, J ≥ 2.
pub fn cmd_lp(cfg: RunConfig, sweep: bool, tail_slack: f64) -> Result<String> {
    let digits = cfg.digits as usize;
    let s = Session::new(cfg)?;
    let (d, c) = (s.degree(), s.bound_c());
    let all = s.evaluate_all()?;
    let evals: Vec<Evaluation> = all.iter().map(|(_, _, e)| e.clone()).collect();
    let setup = s.setup(tail_slack);
    if sweep {
        let r = Report::new("lp-sweep", Some(&s.cfg));
        let mut csv = Csv::new(&r, &["count", "log10_ls_error", "log10_lp_halfwidth", "log10_ratio"]);
        for j in 2..=evals.len() {
            let w = ls_weights(&evals[..j], s.cfg.symbol_cut, d, c, &[])?;
            let ls = combine(&evals[..j], &w, d, c)?.l1_error;
            let lp = lp_bounds(&evals[..j], &Objective::Value, &setup)?.halfwidth().to_f64();
            csv.row(&[j.to_string(), log10_6(ls), log10_6(lp), log10_6(lp / ls)]);
        }
        return Ok(csv.finish());
    }
    let lp = lp_bounds(&evals, &Objective::Value, &setup)?;
    let mut r = Report::new("lp", Some(&s.cfg));
    r.kv("degree", d);
    r.kv("tail_slack", format!("{tail_slack:e}"));
    r.section("bounds");
    r.lp(&lp, digits);
    if evals.len() >= 2 {
        if let Ok(w) = ls_weights(&evals, s.cfg.symbol_cut, d, c, &[]) {
            let comb = combine(&evals, &w, d, c)?;
            r.section("least_squares");
            r.kv("value", dec(&comb.value, digits));
            r.kv("l1_error", format!("{:.6e}", comb.l1_error));
        }
    }
    for (b, _, e) in &all {
        r.section(&format!("evaluation beta={}", beta_label(b)));
        r.evaluation(e, None, digits, 0, 0);
    }
    Ok(r.finish())
}

pub fn cmd_recover(cfg: RunConfig, symbols: &[u64], tail_slack: f64) -> Result<String> {
    if symbols.is_empty() {
        bail!("recover needs at least one --symbol");
    }
    let digits = cfg.digits as usize;
    let s = Session::new(cfg)?;
    let evals: Vec<Evaluation> = s.evaluate_all()?.into_iter().map(|(_, _, e)| e).collect();
    let out = recover_coefficients(&evals, symbols, &s.setup(tail_slack))?;
    let mut r = Report::new("recover", Some(&s.cfg));
    r.kv("degree", s.degree());
    r.kv("evaluations", evals.len());
    r.section("coefficients");
    for (q, (mid, half)) in &out {
        r.kv("symbol", format!("{q} {} {:.6e}", dec(mid, digits), half.to_f64()));
    }
    Ok(r.finish())
}

fn complex_str(z: &Complex, digits: usize) -> String {
    format!("{} {}", dec(z.real(), digits), dec(z.imag(), digits))
}

/// Satake triples, normalization defects, round-trip residuals and optionally local factors.
pub fn cmd_satake(table: Option<&Path>, weight: i64, rho: Option<Rho>, digits: u32) -> Result<String> {
    let data = match table {
        Some(p) => parse_eigen_table(&std::fs::read_to_string(p)?, weight)?,
        None => upsilon20_table(),
    };
    let ctx = PrecisionContext::new(digits);
    let mut r = Report::new("satake", None);
    r.kv("table", table.map_or("upsilon20 (vendored)".into(), |p| p.display().to_string()));
    r.kv("weight", if table.is_some() { weight } else { 20 });
    r.kv("digits", digits);
    let shown = (digits as usize).min(30);
    for h in &data {
        let t = solve_satake(h, &ctx)?;
        r.section(&format!("prime {}", h.p));
        r.kv("lambda_p", &h.lambda_p);
        r.kv("lambda_p2", &h.lambda_p2);
        r.kv("alpha0", complex_str(&t.alpha0, shown));
        r.kv("alpha1", complex_str(&t.alpha1, shown));
        r.kv("alpha2", complex_str(&t.alpha2, shown));
        r.kv("unit_defect", format!("{:.3e}", t.unit_defect()));
        r.kv("round_trip_residual", format!("{:.3e}", round_trip_residual(h, &t)));
        if let Some(rho) = rho {
            let f = local_factor(&t, rho, &ctx)?;
            let coeffs: Vec<String> = f.iter().map(|x| dec(x, shown)).collect();
            r.kv(&format!("local_factor_{}", rho.name()), coeffs.join(" "));
        }
    }
    Ok(r.finish())
}

/// τ(n) and the two weight-24 Hecke eigenforms up to n.
pub fn cmd_forms(n: usize) -> Result<String> {
    if n < 2 {
        bail!("forms needs n ≥ 2");
    }
    let mut r = Report::new("forms", None);
    r.kv("n", n);
    r.section("delta");
    for (i, t) in tau(n).iter().enumerate().skip(1) {
        r.kv("tau", format!("{i} {t}"));
    }
    let f = hecke_eigenforms_s24(n)?;
    r.section("s24");
    r.kv("sqrt_of", format!("{} (r below is its square root)", f.d));
    r.kv("t2", format!("{} {} {} {}", f.t2[0][0], f.t2[0][1], f.t2[1][0], f.t2[1][1]));
    for which in 0..2 {
        r.kv(&format!("a2_f{}", which + 1), &f.a2[which]);
    }
    let (c1, c2) = (f.coefficients(0), f.coefficients(1));
    for i in 1..=n {
        r.kv("a", format!("{i} {} {}", c1[i], c2[i]));
    }
    Ok(r.finish())
}
