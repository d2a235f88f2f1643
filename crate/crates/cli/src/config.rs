//! Run configuration shared by the subcommands.

use anyhow::{bail, Context, Result};
use fewcoef::instances::{builtin, BUILTINS};
use fewcoef::lmodel::{parse_fe, CRat, CoefficientTable, LFunctionInstance, Surd, TestFunction};
use fewcoef::numerics::{parse_rational, PrecisionContext};
use rug::{Integer, Rational};
use std::path::PathBuf;

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSpec {
    Builtin(String),
    /// Functional-equation file; b_1 = 1 and every other coefficient is unknown.
    File(PathBuf),
}

impl InstanceSpec {
    pub fn parse(text: &str) -> Result<Self> {
        if BUILTINS.contains(&text) {
            return Ok(InstanceSpec::Builtin(text.to_string()));
        }
        let path = PathBuf::from(text);
        if path.is_file() {
            return Ok(InstanceSpec::File(path));
        }
        bail!("--instance {text:?} is neither a builtin ({}) nor a readable file", BUILTINS.join(", "))
    }

    pub fn describe(&self) -> String {
        match self {
            InstanceSpec::Builtin(l) => l.clone(),
            InstanceSpec::File(p) => format!("file:{}", p.display()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub instance: InstanceSpec,
    pub s: CRat,
    pub digits: u32,
    /// Empty means the single test function g = 1.
    pub betas: Vec<Rational>,
    pub gauss_c: Rational,
    pub center: Rational,
    pub cutoff: usize,
    pub symbol_cut: u64,
    pub bound_c: Rational,
    pub blind_from: Option<u64>,
    pub free: Vec<u64>,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(instance: InstanceSpec, s: CRat) -> Self {
        RunConfig {
            instance,
            s,
            digits: 30,
            betas: Vec::new(),
            gauss_c: Rational::new(),
            center: Rational::new(),
            cutoff: 2000,
            symbol_cut: 1000,
            bound_c: Rational::from(1),
            blind_from: None,
            free: Vec::new(),
            cache_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < 5 {
            bail!("--digits must be at least 5");
        }
        if self.cutoff < 2 {
            bail!("--cutoff must be at least 2");
        }
        if self.gauss_c < 0 {
            bail!("--gauss-c must be non-negative");
        }
        if self.bound_c < 1 {
            bail!("--bound-c must be at least 1");
        }
        if self.blind_from == Some(0) || self.blind_from == Some(1) {
            bail!("--blind-from must be at least 2 (b_1 = 1 is always known)");
        }
        Ok(())
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits)
    }

    pub fn instance(&self) -> Result<LFunctionInstance> {
        let inst = match &self.instance {
            InstanceSpec::Builtin(label) => builtin(label, self.cutoff)?,
            InstanceSpec::File(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let fe = parse_fe(&text).with_context(|| format!("parsing {}", path.display()))?;
                let mut values = vec![Surd::zero(); self.cutoff];
                values[0] = Surd::one();
                let t = CoefficientTable::known(fe.degree, Rational::new(), Integer::from(1), values)?
                    .blind_from(2, self.bound_c.clone())?;
                LFunctionInstance::new(fe.label.clone(), fe, t)?
            }
        };
        match self.blind_from {
            Some(from) => Ok(inst.blind(from, self.bound_c.clone())?),
            None if self.bound_c != 1 => {
                let mut inst = inst;
                inst.coeffs.bound_constant = self.bound_c.clone();
                Ok(inst)
            }
            None => Ok(inst),
        }
    }

    pub fn test_function(&self, beta: &Rational) -> TestFunction {
        TestFunction::beta_gauss(beta.clone(), self.gauss_c.clone(), self.center.clone())
    }

    pub fn test_functions(&self) -> Vec<(Option<Rational>, TestFunction)> {
        if self.betas.is_empty() && self.gauss_c.is_zero() {
            return vec![(None, TestFunction::one())];
        }
        if self.betas.is_empty() {
            return vec![(Some(Rational::new()), self.test_function(&Rational::new()))];
        }
        self.betas.iter().map(|b| (Some(b.clone()), self.test_function(b))).collect()
    }

    /// Sorts β by distance to `from`, ties going to the smaller β.
    pub fn order_betas_from(&mut self, from: &Rational) {
        self.betas.sort_by(|a, b| {
            let da = Rational::from(a - from).abs();
            let db = Rational::from(b - from).abs();
            da.cmp(&db).then(a.cmp(b))
        });
    }

    /// `key: value` lines echoed into every output.
    pub fn header(&self) -> Vec<(String, String)> {
        let betas = if self.betas.is_empty() {
            "none".to_string()
        } else {
            self.betas.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
        };
        let free = if self.free.is_empty() {
            "none".to_string()
        } else {
            self.free.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
        };
        vec![
            ("instance".into(), self.instance.describe()),
            ("s".into(), format_crat(&self.s)),
            ("digits".into(), self.digits.to_string()),
            ("working_bits".into(), self.ctx().working_bits.to_string()),
            ("betas".into(), betas),
            ("gauss_c".into(), self.gauss_c.to_string()),
            ("center".into(), self.center.to_string()),
            ("cutoff".into(), self.cutoff.to_string()),
            ("symbol_cut".into(), self.symbol_cut.to_string()),
            ("bound_c".into(), self.bound_c.to_string()),
            ("blind_from".into(), self.blind_from.map_or("none".into(), |b| b.to_string())),
            ("free".into(), free),
        ]
    }
}

pub fn format_crat(s: &CRat) -> String {
    if s.im < 0 {
        format!("{} - {}i", s.re, Rational::from(-&s.im))
    } else {
        format!("{} + {}i", s.re, s.im)
    }
}

/// Parses `a`, `a+bi`, `a-bi` or `bi` with rational or decimal parts, e.g. `1/2+10i`.
pub fn parse_complex(text: &str) -> Result<CRat> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let rat = |x: &str| parse_rational(x).map_err(|e| anyhow::anyhow!("bad number {x:?} in {text:?}: {e}"));
    let Some(body) = t.strip_suffix('i') else {
        return Ok(CRat::real(rat(&t)?));
    };
    // split at the last sign that is not leading and not part of an exponent
    let split = body
        .char_indices()
        .filter(|&(i, c)| (c == '+' || c == '-') && i > 0 && !body[..i].ends_with(['e', 'E']))
        .map(|(i, _)| i)
        .next_back();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(CRat::new(rat(re)?, rat(im.trim_start_matches('+'))?))
}

/// `lo:hi:step`, inclusive of hi when it lands on the grid.
pub fn parse_beta_range(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("--beta-range expects lo:hi:step, got {text:?}");
    }
    let lo = parse_rational(parts[0])?;
    let hi = parse_rational(parts[1])?;
    let step = parse_rational(parts[2])?;
    if step <= 0 {
        bail!("--beta-range step must be positive");
    }
    let mut out = Vec::new();
    let mut b = lo;
    while b <= hi {
        out.push(b.clone());
        b += &step;
    }
    Ok(out)
}

/// Comma-separated β values.
pub fn parse_beta_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').filter(|x| !x.trim().is_empty()).map(|x| Ok(parse_rational(x)?)).collect()
}
