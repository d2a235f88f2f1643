use crate::error::{Error, Result};
use crate::satake::HeckeDatum;
use rug::Integer;

/// Hecke eigenvalues of the weight-20 non-lift Siegel cusp form, p ≤ 79.
pub const UPSILON20_TSV: &str = include_str!("../../data/upsilon20.tsv");

/// Parses `p TAB lambda_p TAB lambda_p2` rows; `#` starts a comment.
pub fn parse_eigen_table(text: &str, k: i64) -> Result<Vec<HeckeDatum>> {
    let mut out: Vec<HeckeDatum> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let cols: Vec<&str> = body.split_whitespace().collect();
        if cols.len() != 3 {
            return Err(Error::Parse { line, msg: format!("expected 3 columns, found {}", cols.len()) });
        }
        let p: u64 = cols[0].parse().map_err(|_| Error::Parse { line, msg: format!("bad prime '{}'", cols[0]) })?;
        let int = |s: &str| -> Result<Integer> {
            s.parse().map_err(|_| Error::Parse { line, msg: format!("bad integer '{s}'") })
        };
        if out.iter().any(|h| h.p == p) {
            return Err(Error::Parse { line, msg: format!("duplicate prime {p}") });
        }
        let h = HeckeDatum::new(p, int(cols[1])?, int(cols[2])?, k)
            .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        out.push(h);
    }
    out.sort_by_key(|h| h.p);
    Ok(out)
}

pub fn upsilon20_table() -> Vec<HeckeDatum> {
    parse_eigen_table(UPSILON20_TSV, 20).expect("vendored table parses")
}
