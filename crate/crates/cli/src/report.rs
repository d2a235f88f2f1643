//! Text reports and CSV tables.
//!
//! A report is a sequence of `key: value` lines. It opens with a header block (format
//! version, command, tool versions, echoed configuration), followed by `[section]` blocks.
//! Repeated rows inside a section (`term`, `delta`, `weight`, `symbol`) put their fields in
//! whitespace-separated columns after the key. CSV output starts with the same header block,
//! with each line prefixed by `# `, then one header row and the data rows. Values printed as
//! log10 use 6 decimals; a zero value prints as `-inf`, an infinite one as `inf`.

use crate::config::RunConfig;
use fewcoef::afe::{error_l1, AfeTerms, Evaluation, TailModel};
use fewcoef::lmodel::ramanujan_bound;
use fewcoef::optimize::{Combination, LpResult, WeightVector};
use rug::Float;

pub const FORMAT_VERSION: u32 = 1;

pub fn versions() -> String {
    format!("fewcoef {}, fewcoef-cli {}", fewcoef::VERSION, env!("CARGO_PKG_VERSION"))
}

/// Decimal string with `digits` significant digits.
pub fn dec(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits.max(2)))
}

/// log10 with 6 decimals.
pub fn log10_6(x: f64) -> String {
    let x = x.abs();
    if x == 0.0 {
        "-inf".into()
    } else if x.is_infinite() {
        "inf".into()
    } else {
        format!("{:.6}", x.log10())
    }
}

#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, cfg: Option<&RunConfig>) -> Report {
        let mut r = Report::default();
        r.lines.push("# fewcoef report".into());
        r.kv("format", FORMAT_VERSION);
        r.kv("command", command);
        r.kv("versions", versions());
        if let Some(cfg) = cfg {
            for (k, v) in cfg.header() {
                r.kv(&k, v);
            }
        }
        r
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn section(&mut self, name: &str) {
        self.lines.push(String::new());
        self.lines.push(format!("[{name}]"));
    }

    pub fn finish(self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    /// The header block as CSV comment lines.
    pub fn csv_preamble(&self) -> String {
        self.lines.iter().map(|l| format!("# {}\n", l.trim_start_matches("# "))).collect()
    }

    pub fn tail(&mut self, t: &TailModel) {
        self.kv(
            "tail_fit",
            format!(
                "slope={:.6e} intercept={:.6e} window={} fit_end={} floor={:.3e} ram_weight={:.3e}",
                t.slope, t.intercept, t.window, t.fit_end, t.floor, t.ram_weight
            ),
        );
        self.kv(
            "tail_check",
            format!("predicted_last={:.3e} actual_last={:.3e} accuracy={:.3e}", t.predicted_last, t.actual_last, t.accuracy),
        );
    }

    /// One evaluation: value, error, diagnostics, leading terms and the largest weighted deltas.
    pub fn evaluation(&mut self, e: &Evaluation, terms: Option<&AfeTerms>, digits: usize, show_terms: usize, top: usize) {
        let d = e.degree;
        let c = e.bound_constant;
        self.kv("test_function", &e.g);
        self.kv("value", dec(&e.known_part, digits));
        self.kv("l1_error", format!("{:.6e}", error_l1(e, d, c)));
        self.kv("tail_bound", format!("{:.6e}", e.tail_bound));
        self.tail(&e.tail);
        self.kv("imag_residual", format!("{:.3e}", e.imag_residual));
        self.kv("symbols", e.deltas.len());
        if let Some(t) = terms {
            let p = &t.plan;
            self.kv(
                "plan",
                format!(
                    "nu={} step={} half_width={} center={} nodes={} working_bits={}",
                    p.plan.nu,
                    p.plan.step,
                    p.plan.half_width,
                    p.plan.center,
                    p.plan.node_count(),
                    p.working_bits
                ),
            );
            for n in 1..=show_terms.min(t.cutoff) as u64 {
                self.kv("term", format!("{n} {}", dec(t.coefficient(n), 10)));
            }
        }
        let mut weighted: Vec<(u64, &Float, f64)> = e
            .deltas
            .iter()
            .map(|(q, v)| (*q, &v.0, v.0.to_f64().abs() * c * ramanujan_bound(*q, d) as f64))
            .collect();
        weighted.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
        for (q, v, w) in weighted.into_iter().take(top) {
            self.kv("delta", format!("{q} {} {:.6e}", dec(v, 10), w));
        }
    }

    pub fn weights(&mut self, w: &WeightVector, comb: &Combination, digits: usize) {
        self.kv("value", dec(&comb.value, digits));
        self.kv("l1_error", format!("{:.6e}", comb.l1_error));
        self.kv("tail_part", format!("{:.6e}", comb.tail));
        self.kv("condition", format!("{:.3e}", w.condition));
        for (label, c) in w.betas.iter().zip(&w.c) {
            self.kv("weight", format!("{label} {}", dec(c, 12)));
        }
        for q in &w.free {
            if let Some(m) = comb.deltas.get(q) {
                self.kv("free_multiplier", format!("{q} {}", dec(m, digits)));
            }
        }
    }

    pub fn lp(&mut self, r: &LpResult, digits: usize) {
        self.kv("objective", &r.objective_label);
        self.kv("min", dec(&r.min, digits));
        self.kv("max", dec(&r.max, digits));
        self.kv("midpoint", dec(&r.midpoint(), digits));
        self.kv("halfwidth", format!("{:.6e}", r.halfwidth().to_f64()));
        self.kv("reference", r.reference);
        self.kv("variables", r.variables);
        self.kv("pivots", r.pivots);
        let flags = |v: &[bool]| v.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>();
        self.kv("active_at_min", flags(&r.certificate.0));
        self.kv("active_at_max", flags(&r.certificate.1));
    }
}

/// CSV builder: header comment block, one column-name row, then rows.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(report: &Report, columns: &[&str]) -> Csv {
        let mut out = report.csv_preamble();
        out.push_str(&columns.join(","));
        out.push('\n');
        Csv { out }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.out.push_str(&fields.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
